from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramapi.mpcore import (
    ConvergenceError,
    DomainError,
    PrecisionContext,
    agm,
    as_fraction,
    bernoulli,
    ellip_E,
    ellip_K,
    ellip_K_complement,
    ellip_KE,
    gamma_fn,
    gauss_2f1,
    gauss_2f1_complement,
    hyp2f1_quarter_seven,
    legendre_P,
    legendre_relation_residual,
    pi_agm,
    sextic_u,
    zeta_even,
)

CTX = PrecisionContext(60)
MP = CTX.mp
THIRD, TWO_THIRDS = Fraction(1, 3), Fraction(2, 3)

# Frozen reference values: mpmath at 70 dps (agm, ellipk, ellipe, quad,
# gamma, hyp2f1, zeta), computed once outside the package.
AGM_SQRT2_1 = "1.19814023473559220743992249228032387822721266321565155826367"
K_HALF = "1.85407467730137191843385034719526004621759882352176690558593"
E_HALF = "1.35064388104767550252017473533872584134952236692435454532325"
K_09 = "2.57809211334817318820257077181650623511355737425765401514387"
GAMMA_QUARTER = "3.62560990822190831193068515586767200299516768288006546743338"
Z_HALF = "1.15959526696392836576999205157002088194516526343978285526311"
U_HALF = "1.09843069683986206894293516160869882228393848169225372302703"
U_095 = "1.44698211798209144968840320084253679738660172578785773748075"
Q7_TENTH = "1.04789993976564686397671598082073569451858476088178364625005"
ZETA4 = "1.08232323371113819151600369654116790277475095191872690768298"


def close(x, ref, digits=55):
    return abs(x - MP.mpf(ref)) < MP.mpf(10) ** -digits


def test_context_rejects_low_digits():
    with pytest.raises(ValueError):
        PrecisionContext(10)


def test_context_is_hashable_and_doubles():
    assert hash(PrecisionContext(40)) == hash(PrecisionContext(40))
    assert PrecisionContext(40).doubled().digits == 80
    assert PrecisionContext(40).extended(5).dps == 55


def test_as_fraction_parses_strings():
    assert as_fraction("1/3") == Fraction(1, 3)
    assert as_fraction("0.5") == Fraction(1, 2)
    with pytest.raises(TypeError):
        as_fraction(True)


def test_agm_trivial_cases():
    assert agm(1, 1, CTX) == 1
    assert agm(1, 0, CTX) == 0


def test_agm_sqrt2():
    # oracle: mpmath.agm
    assert close(agm(MP.sqrt(2), 1, CTX), AGM_SQRT2_1)


def test_agm_negative_raises():
    with pytest.raises(DomainError):
        agm(-1, 1, CTX)


def test_pi_agm_matches_mpmath():
    ctx = PrecisionContext(200)
    mpmath.mp.dps = 230
    assert abs(pi_agm(ctx) - ctx.mp.mpf(mpmath.pi)) < ctx.mp.mpf(10) ** -205


def test_K_zero_is_half_pi():
    assert ellip_K(0, CTX) == CTX.pi / 2


def test_K_half_quadrature():
    # oracle: mpmath.quad of the defining integral, also Gamma(1/4)^2/(4 sqrt pi)
    assert close(ellip_K(Fraction(1, 2), CTX), K_HALF)
    g = gamma_fn(Fraction(1, 4), CTX)
    assert abs(ellip_K(Fraction(1, 2), CTX) - g * g / (4 * MP.sqrt(CTX.pi))) < CTX.tol(3)


def test_K_matches_series_at_09():
    m = MP.mpf("0.9")
    assert close(ellip_K(m, CTX), K_09)
    assert abs(ellip_K(m, CTX) - CTX.pi / 2 * gauss_2f1(Fraction(1, 2), Fraction(1, 2), 1, m, CTX)) < CTX.tol(3)


def test_K_pole_at_one():
    with pytest.raises(DomainError):
        ellip_K(1, CTX)


def test_K_complement_tiny_argument():
    # K(1 - m) for m far below the working epsilon still has its log behaviour
    m = MP.mpf(10) ** -200
    expected = MP.log(4 / MP.sqrt(m))
    assert abs(ellip_K_complement(m, CTX) / expected - 1) < MP.mpf(10) ** -50


def test_E_values():
    assert ellip_E(0, CTX) == CTX.pi / 2
    assert ellip_E(1, CTX) == 1
    assert close(ellip_E(Fraction(1, 2), CTX), E_HALF)
    with pytest.raises(DomainError):
        ellip_E(2, CTX)


def test_KE_pair_consistent():
    pair = ellip_KE(Fraction(1, 3), CTX)
    assert abs(pair.K - ellip_K(Fraction(1, 3), CTX)) < CTX.tol(3)
    assert abs(pair.E - ellip_E(Fraction(1, 3), CTX)) < CTX.tol(3)


@pytest.mark.parametrize("k", range(1, 10))
def test_K_equals_hypergeometric(k):
    m = Fraction(k, 10)
    lhs = CTX.pi / 2 * gauss_2f1(Fraction(1, 2), Fraction(1, 2), 1, m, CTX)
    assert abs(lhs - ellip_K(m, CTX)) < CTX.tol(3)


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000)))
def test_legendre_relation(m):
    assert legendre_relation_residual(m, CTX) < CTX.tol(3)


def test_2f1_at_zero():
    assert gauss_2f1(Fraction(1, 5), 3, 2, 0, CTX) == 1


def test_2f1_cubic_at_half_matches_brute_force():
    # oracle: mpmath.hyp2f1, plus 200-term partial sum at 50 digits
    assert close(gauss_2f1(THIRD, TWO_THIRDS, 1, Fraction(1, 2), CTX), Z_HALF)
    mpmath.mp.dps = 60
    s, t = mpmath.mpf(0), mpmath.mpf(1)
    for n in range(200):
        s += t
        t *= (n + mpmath.mpf(1) / 3) * (n + mpmath.mpf(2) / 3) / (n + 1) ** 2 / 2
    assert abs(gauss_2f1(THIRD, TWO_THIRDS, 1, Fraction(1, 2), CTX) - s) < MP.mpf(10) ** -50


def test_sextic_u_values():
    assert close(sextic_u(Fraction(1, 2), CTX), U_HALF)
    # w > 1/2 goes through the log connection formula
    assert close(sextic_u(Fraction(95, 100), CTX), U_095)


@pytest.mark.parametrize("w", ["0.4", "0.45", "0.5", "0.55", "0.6"])
def test_connection_and_direct_agree_on_overlap(w):
    w = MP.mpf(w)
    via_complement = gauss_2f1_complement(THIRD, TWO_THIRDS, 1, 1 - w, CTX)
    direct = gauss_2f1(THIRD, TWO_THIRDS, 1, w, CTX)
    assert abs(via_complement - direct) < CTX.tol(5)
    # gauss_2f1_complement sends v >= 1/2 to the direct path; force both branches
    from ramapi.mpcore import _hyp_near_one, _hyp_series

    assert abs(_hyp_near_one(THIRD, TWO_THIRDS, Fraction(1), 1 - w, CTX) - _hyp_series(THIRD, TWO_THIRDS, Fraction(1), w, CTX)) < CTX.tol(5)


def test_2f1_two_term_connection():
    # c - a - b = 1/2 is the non-log branch
    w = MP.mpf("0.9")
    mpmath.mp.dps = 70
    ref = mpmath.hyp2f1(mpmath.mpf(1) / 4, mpmath.mpf(1) / 4, 1, mpmath.mpf("0.9"))
    assert abs(gauss_2f1(Fraction(1, 4), Fraction(1, 4), 1, w, CTX) - ref) < CTX.tol(3)


def test_2f1_diverges_at_one_when_log_case():
    assert gauss_2f1(THIRD, TWO_THIRDS, 1, 1, CTX) == MP.inf


def test_2f1_domain():
    with pytest.raises(DomainError):
        gauss_2f1(THIRD, TWO_THIRDS, 1, 2, CTX)
    with pytest.raises(DomainError):
        gauss_2f1(THIRD, TWO_THIRDS, -2, Fraction(1, 2), CTX)


def test_legendre_P_trivial_and_cubic():
    assert legendre_P(Fraction(-1, 3), 1, CTX) == 1
    w = MP.mpf("0.2")
    assert abs(legendre_P(Fraction(-1, 3), 1 - 2 * w, CTX) - gauss_2f1(THIRD, TWO_THIRDS, 1, w, CTX)) < CTX.tol(3)
    w = MP.mpf("0.1")
    assert abs(legendre_P(Fraction(-1, 6), 1 - 2 * w, CTX) - sextic_u(w, CTX)) < CTX.tol(3)
    with pytest.raises(DomainError):
        legendre_P(Fraction(-1, 3), -1, CTX)


def test_gamma_values():
    assert gamma_fn(1, CTX) == 1
    assert abs(gamma_fn(Fraction(1, 2), CTX) - MP.sqrt(CTX.pi)) < CTX.tol(3)
    assert close(gamma_fn(Fraction(1, 4), CTX), GAMMA_QUARTER)
    # reflection region
    mpmath.mp.dps = 70
    assert abs(gamma_fn(Fraction(-1, 4), CTX) - mpmath.gamma(mpmath.mpf(-1) / 4)) < CTX.tol(3)


def test_gamma_pole():
    with pytest.raises(DomainError):
        gamma_fn(-2, CTX)
    with pytest.raises(DomainError):
        gamma_fn(0, CTX)


def test_bernoulli_and_zeta():
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(6) == Fraction(1, 42)
    assert close(zeta_even(2, CTX), ZETA4)


def test_quarter_seven_closed_form():
    assert hyp2f1_quarter_seven(0, CTX) == 1
    w = MP.mpf(1) / 10
    assert abs(hyp2f1_quarter_seven(w, CTX) - MP.mpf(Q7_TENTH)) < MP.mpf(10) ** -40
    with pytest.raises(DomainError):
        hyp2f1_quarter_seven(1, CTX)


@pytest.mark.parametrize("w", [Fraction(1, 10), Fraction(1, 2)])
def test_quarter_seven_vs_series(w):
    direct = gauss_2f1(Fraction(1, 4), Fraction(7, 4), 1, w, CTX)
    assert abs(hyp2f1_quarter_seven(w, CTX) - direct) < CTX.tol(10)


def test_series_cap_raises():
    ctx = PrecisionContext(30, max_terms=5)
    with pytest.raises(ConvergenceError):
        gauss_2f1(THIRD, TWO_THIRDS, 1, Fraction(49, 100), ctx)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["K", "E", "z", "u", "gamma"]), st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50)))
def test_precision_doubling_stable(op, x):
    lo, hi = PrecisionContext(30), PrecisionContext(60)
    fns = {
        "K": lambda c: ellip_K(x, c),
        "E": lambda c: ellip_E(x, c),
        "z": lambda c: gauss_2f1(THIRD, TWO_THIRDS, 1, x, c),
        "u": lambda c: sextic_u(x, c),
        "gamma": lambda c: gamma_fn(x, c),
    }
    a, b = fns[op](lo), fns[op](hi)
    assert abs(hi.mp.mpf(a) - b) < hi.mp.mpf(10) ** (-30 + 2) * max(1, abs(b))
