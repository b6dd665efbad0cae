"""Arbitrary-precision foundation.

Every routine takes an explicit :class:`PrecisionContext`.  Each context owns
a private :class:`mpmath.MPContext`, so nothing here touches the global
``mpmath.mp`` precision and values can be shared freely between threads.

The parameter convention is ``m = k**2`` throughout: ``ellip_K(m)`` is the
complete elliptic integral of the first kind at parameter ``m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Union

import mpmath

Rational = Union[int, Fraction, str]


class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class ConvergenceError(ArithmeticError):
    """A series or iteration hit its term cap before reaching tolerance."""


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for a family of computations.

    ``digits`` is the decimal precision callers care about; ``guard`` extra
    digits are carried internally.  Series stop once a term falls below
    ``10**-(digits + guard)`` relative to the running sum, and give up with
    :class:`ConvergenceError` after ``max_terms`` terms.
    """

    digits: int = 60
    guard: int = 10
    max_terms: int = 10**6

    def __post_init__(self) -> None:
        if int(self.digits) != self.digits or self.digits < 15:
            raise ValueError(f"digits must be an integer >= 15, got {self.digits!r}")
        if self.guard < 0:
            raise ValueError("guard must be non-negative")
        if self.max_terms <= 0:
            raise ValueError("max_terms must be positive")

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    @cached_property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        ctx = mpmath.MPContext()
        ctx.dps = self.dps
        return ctx

    @cached_property
    def eps(self):
        return self.mp.mpf(10) ** (-self.dps)

    @cached_property
    def pi(self):
        return pi_agm(self)

    def tol(self, slack: int = 0):
        """``10**(-digits + slack)``, the usual residual threshold."""
        return self.mp.mpf(10) ** (slack - self.digits)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return replace(self, digits=int(digits))

    def extended(self, extra: int) -> "PrecisionContext":
        """Same digits, ``extra`` more guard digits."""
        return replace(self, guard=self.guard + int(extra))

    def doubled(self) -> "PrecisionContext":
        return replace(self, digits=2 * self.digits)


def as_fraction(x: Rational) -> Fraction:
    """Parse an exact rational (``3``, ``Fraction(1, 3)``, ``"1/3"``, ``"0.5"``)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def to_mpf(x, ctx: PrecisionContext):
    """Convert ints, Fractions, rational strings and mpf values into ``ctx``."""
    mp = ctx.mp
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, str) and "/" in x:
        return to_mpf(Fraction(x), ctx)
    return mp.mpf(x)


def sqrt_rational(r: Rational, ctx: PrecisionContext):
    r = as_fraction(r)
    return ctx.mp.sqrt(to_mpf(r, ctx))


# ---------------------------------------------------------------------------
# AGM, pi, complete elliptic integrals
# ---------------------------------------------------------------------------

def agm(a, b, ctx: PrecisionContext):
    """Arithmetic-geometric mean of two non-negative reals."""
    mp = ctx.mp
    a, b = to_mpf(a, ctx), to_mpf(b, ctx)
    if a < 0 or b < 0:
        raise DomainError("agm requires non-negative arguments")
    if a == 0 or b == 0:
        return mp.zero
    eps = ctx.eps
    for _ in range(ctx.dps + 64):
        if abs(a - b) <= eps * a:
            return (a + b) / 2
        a, b = (a + b) / 2, mp.sqrt(a * b)
    raise ConvergenceError("agm did not converge")


def pi_agm(ctx: PrecisionContext):
    """pi by the Gauss-Legendre (Brent-Salamin) AGM iteration.

    Kept separate from any series under test so it can serve as an
    independent reference value.
    """
    mp = mpmath.MPContext()
    mp.dps = ctx.dps + 10
    a, b = mp.one, 1 / mp.sqrt(2)
    t, p = mp.mpf(1) / 4, mp.one
    eps = mp.mpf(10) ** (-(ctx.dps + 5))
    while abs(a - b) > eps:
        an = (a + b) / 2
        b = mp.sqrt(a * b)
        t -= p * (a - an) ** 2
        a, p = an, 2 * p
    return ctx.mp.mpf((a + b) ** 2 / (4 * t))


@dataclass(frozen=True)
class EllipticPair:
    """K and E at the same parameter m."""

    m: object
    K: object
    E: object

    def legendre_residual(self, other: "EllipticPair", ctx: PrecisionContext):
        """|E K' + E' K - K K' - pi/2| for ``other`` at parameter 1 - m."""
        return abs(self.E * other.K + other.E * self.K - self.K * other.K - ctx.pi / 2)


def ellip_K(m, ctx: PrecisionContext):
    """Complete elliptic integral of the first kind at parameter ``m`` in [0, 1)."""
    mp = ctx.mp
    m = to_mpf(m, ctx)
    if m >= 1:
        raise DomainError("K(m) has a logarithmic pole at m = 1")
    if m < 0:
        raise DomainError("negative parameter is not supported")
    return ctx.pi / (2 * agm(mp.one, mp.sqrt(1 - m), ctx))


def ellip_K_complement(m, ctx: PrecisionContext):
    """K(1 - m) computed from m itself, so tiny m never rounds 1 - m to 1."""
    mp = ctx.mp
    m = to_mpf(m, ctx)
    if m <= 0:
        raise DomainError("K(1 - m) has a logarithmic pole at m = 0")
    if m > 1:
        raise DomainError("complementary parameter must be <= 1")
    return ctx.pi / (2 * agm(mp.one, mp.sqrt(m), ctx))


def ellip_KE(m, ctx: PrecisionContext) -> EllipticPair:
    """K(m) and E(m) from a single AGM run.

    E = K * (1 - sum_{n>=0} 2**(n-1) c_n**2) with c_0**2 = m and
    c_{n+1} = (a_n - b_n) / 2.
    """
    mp = ctx.mp
    m = to_mpf(m, ctx)
    if m < 0 or m > 1:
        raise DomainError("E(m) needs 0 <= m <= 1")
    if m == 1:
        return EllipticPair(m, mp.inf, mp.one)
    a, b = mp.one, mp.sqrt(1 - m)
    s = m / 2
    weight = mp.one / 2
    eps = ctx.eps
    for _ in range(ctx.dps + 64):
        c = (a - b) / 2
        a, b = (a + b) / 2, mp.sqrt(a * b)
        weight *= 2
        s += weight * c * c
        if abs(c) <= eps * a:
            break
    else:
        raise ConvergenceError("elliptic AGM did not converge")
    K = ctx.pi / (2 * a)
    return EllipticPair(m, K, K * (1 - s))


def ellip_E(m, ctx: PrecisionContext):
    """Complete elliptic integral of the second kind at parameter ``m`` in [0, 1]."""
    return ellip_KE(m, ctx).E


def legendre_relation_residual(m, ctx: PrecisionContext):
    m = to_mpf(m, ctx)
    return ellip_KE(m, ctx).legendre_residual(ellip_KE(1 - m, ctx), ctx)


# ---------------------------------------------------------------------------
# Bernoulli numbers, Gamma, digamma
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa; B_1 = +1/2 convention, irrelevant for even indices.
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2)."""
    if n < 0:
        raise DomainError("Bernoulli index must be non-negative")
    if n == 1:
        return Fraction(-1, 2)
    if n > 1 and n % 2:
        return Fraction(0)
    # grow the cache in blocks so repeated calls stay cheap
    size = max(32, 1 << (n.bit_length()))
    return _bernoulli_table(size)[n]


def zeta_even(k: int, ctx: PrecisionContext):
    """zeta(2k) = (-1)**(k+1) B_2k (2 pi)**(2k) / (2 (2k)!) for k >= 1."""
    if k < 1:
        raise DomainError("zeta_even needs k >= 1")
    b = bernoulli(2 * k)
    val = to_mpf(abs(b), ctx) * (2 * ctx.pi) ** (2 * k) / (2 * math.factorial(2 * k))
    return val


def _stirling_shift(x, wp_ctx: PrecisionContext):
    # Shift point: beyond ~1.5 * dps the Stirling tail needs only ~dps/4 terms.
    target = int(1.5 * wp_ctx.dps) + 10
    return max(0, math.ceil(target - float(x)))


def _log_gamma_large(z, wp: PrecisionContext):
    """Stirling series for log Gamma(z), z large and positive.

    For real z > 0 the remainder is bounded by the first omitted term, so
    stopping when a term drops below eps is a rigorous cutoff.
    """
    mp = wp.mp
    total = (z - mp.mpf(0.5)) * mp.log(z) - z + mp.log(2 * wp.pi) / 2
    eps = wp.eps
    z2 = z * z
    zpow = z
    prev = None
    for k in range(1, wp.max_terms):
        term = to_mpf(bernoulli(2 * k), wp) / (2 * k * (2 * k - 1) * zpow)
        total += term
        if abs(term) < eps:
            return total
        if prev is not None and abs(term) > prev:
            raise ConvergenceError("Stirling series started diverging; shift too small")
        prev = abs(term)
        zpow *= z2
    raise ConvergenceError("Stirling series hit the term cap")


def gamma_fn(x, ctx: PrecisionContext):
    """Gamma function for real ``x``; reflection for ``x < 1/2``."""
    mp = ctx.mp
    if isinstance(x, (Fraction, str)) or isinstance(x, int):
        xf = as_fraction(x)
        if xf.denominator == 1 and xf <= 0:
            raise DomainError(f"Gamma has a pole at {xf}")
        x = to_mpf(xf, ctx)
    else:
        x = to_mpf(x, ctx)
        if x <= 0 and x == mp.floor(x):
            raise DomainError(f"Gamma has a pole at {x}")
    if x < mp.mpf(0.5):
        s = mp.sinpi(x)
        return ctx.pi / (s * gamma_fn(1 - x, ctx))
    if x == 1 or x == 2:
        return mp.one
    shift = _stirling_shift(x, ctx)
    z0 = float(x) + shift
    extra = 6 + int(math.log10(max(10.0, z0 * math.log(z0) + 1)))
    wp = ctx.extended(extra)
    xw = wp.mp.mpf(x)
    z = xw + shift
    lg = _log_gamma_large(z, wp)
    prod = wp.mp.one
    for j in range(shift):
        prod *= xw + j
    return mp.mpf(wp.mp.exp(lg) / prod)


def digamma(x, ctx: PrecisionContext):
    """psi(x) for x > 0 via upward shift and the asymptotic series."""
    mp = ctx.mp
    x = to_mpf(x, ctx)
    if x <= 0:
        raise DomainError("digamma implemented for x > 0 only")
    wp = ctx.extended(5)
    xw = wp.mp.mpf(x)
    shift = _stirling_shift(xw, wp)
    acc = wp.mp.zero
    for j in range(shift):
        acc += 1 / (xw + j)
    z = xw + shift
    total = wp.mp.log(z) - 1 / (2 * z)
    z2 = z * z
    zpow = z2
    eps = wp.eps
    for k in range(1, wp.max_terms):
        term = to_mpf(bernoulli(2 * k), wp) / (2 * k * zpow)
        total -= term
        if abs(term) < eps:
            break
        zpow *= z2
    return mp.mpf(total - acc)


@lru_cache(maxsize=512)
def _gamma_rational(x: Fraction, ctx: PrecisionContext):
    return gamma_fn(x, ctx)


@lru_cache(maxsize=512)
def _digamma_rational(x: Fraction, ctx: PrecisionContext):
    return digamma(to_mpf(x, ctx), ctx)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

def _check_params(a, b, c) -> tuple[Fraction, Fraction, Fraction]:
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    if c.denominator == 1 and c <= 0:
        raise DomainError("c must not be a non-positive integer")
    return a, b, c


def _hyp_series(a: Fraction, b: Fraction, c: Fraction, w, ctx: PrecisionContext):
    """Direct partial sums of sum (a)_n (b)_n / (c)_n w**n / n!."""
    mp = ctx.mp
    ap, aq = a.numerator, a.denominator
    bp, bq = b.numerator, b.denominator
    cp, cq = c.numerator, c.denominator
    term = mp.one
    total = mp.one
    eps = ctx.eps
    prev = None
    for n in range(ctx.max_terms):
        num = (ap + n * aq) * (bp + n * bq) * cq
        if num == 0:
            return total
        den = (cp + n * cq) * (n + 1) * aq * bq
        term = term * num * w / den
        total += term
        mag = abs(term)
        if mag <= eps * abs(total) and (prev is None or mag <= prev):
            return total
        prev = mag
    raise ConvergenceError(f"2F1 series did not converge within {ctx.max_terms} terms")


def _hyp_log_connection(a: Fraction, b: Fraction, v, ctx: PrecisionContext):
    """2F1(a, b; a+b; 1 - v) for small v (the logarithmic case c - a - b = 0).

    Uses  Gamma(a+b)/(Gamma(a)Gamma(b)) * sum (a)_n (b)_n / (n!)**2
          * [2 psi(n+1) - psi(a+n) - psi(b+n) - log(1-w)] (1-w)**n.
    """
    mp = ctx.mp
    logv = mp.log(v)
    pref = _gamma_rational(a + b, ctx) / (_gamma_rational(a, ctx) * _gamma_rational(b, ctx))
    psi1 = _digamma_rational(Fraction(1), ctx)
    psia = _digamma_rational(a, ctx)
    psib = _digamma_rational(b, ctx)
    ap, aq = a.numerator, a.denominator
    bp, bq = b.numerator, b.denominator
    coef = mp.one
    total = mp.zero
    eps = ctx.eps
    prev = None
    for n in range(ctx.max_terms):
        bracket = 2 * psi1 - psia - psib - logv
        term = coef * bracket
        total += term
        mag = abs(coef) * (abs(bracket) + 1)
        if n > 0 and mag <= eps * abs(total) and (prev is None or mag <= prev):
            return pref * total
        prev = mag
        # advance n -> n+1
        an = mp.mpf(ap + n * aq) / aq
        bn = mp.mpf(bp + n * bq) / bq
        psi1 += mp.one / (n + 1)
        psia += 1 / an
        psib += 1 / bn
        coef = coef * (ap + n * aq) * (bp + n * bq) * v / (aq * bq * (n + 1) ** 2)
    raise ConvergenceError("2F1 log-connection series did not converge")


def _hyp_two_term_connection(a: Fraction, b: Fraction, c: Fraction, v, ctx: PrecisionContext):
    """2F1(a, b; c; 1 - v) by the connection formula when c - a - b is not an integer."""
    mp = ctx.mp
    s = c - a - b
    g = lambda t: _gamma_rational(t, ctx)  # noqa: E731
    first = g(c) * g(s) / (g(c - a) * g(c - b)) * _hyp_series(a, b, 1 - s, v, ctx)
    second = (
        mp.power(v, to_mpf(s, ctx))
        * g(c) * g(-s) / (g(a) * g(b))
        * _hyp_series(c - a, c - b, 1 + s, v, ctx)
    )
    return first + second


def gauss_2f1(a: Rational, b: Rational, c: Rational, w, ctx: PrecisionContext):
    """Gauss hypergeometric 2F1(a, b; c; w) for rational parameters, real -1 < w < 1.

    For w <= 1/2 the defining series is summed directly; for w > 1/2 the
    standard connection formula at 1 - w is used (with the logarithmic
    variant when c = a + b).  Arguments below -1/2 go through the Pfaff
    transformation.  At w = 1 with c = a + b the function diverges and
    ``+inf`` is returned.
    """
    mp = ctx.mp
    a, b, c = _check_params(a, b, c)
    w = to_mpf(w, ctx)
    if w == 0:
        return mp.one
    for p in (a, b):
        if p.denominator == 1 and p <= 0 and abs(w) < 1:
            return _hyp_series(a, b, c, w, ctx)
    s = c - a - b
    if w == 1:
        if s == 0:
            return mp.inf
        if s > 0:
            g = lambda t: _gamma_rational(t, ctx)  # noqa: E731
            return g(c) * g(s) / (g(c - a) * g(c - b))
        raise DomainError("2F1 diverges at w = 1 when c - a - b < 0")
    if w > 1 or w <= -1:
        raise DomainError("2F1 is only evaluated for -1 < w <= 1")
    if w < -mp.mpf(0.5):
        # Pfaff: 2F1(a,b;c;w) = (1-w)^(-a) 2F1(a, c-b; c; w/(w-1))
        return mp.power(1 - w, -to_mpf(a, ctx)) * gauss_2f1(a, c - b, c, w / (w - 1), ctx)
    if w <= mp.mpf(0.5):
        return _hyp_series(a, b, c, w, ctx)
    return _hyp_near_one(a, b, c, 1 - w, ctx)


def _hyp_near_one(a: Fraction, b: Fraction, c: Fraction, v, ctx: PrecisionContext):
    s = c - a - b
    if s == 0:
        return _hyp_log_connection(a, b, v, ctx)
    if s.denominator != 1:
        return _hyp_two_term_connection(a, b, c, v, ctx)
    # c - a - b a non-zero integer: fall back to the (slower) direct series.
    return _hyp_series(a, b, c, 1 - v, ctx)


def gauss_2f1_complement(a: Rational, b: Rational, c: Rational, v, ctx: PrecisionContext):
    """2F1(a, b; c; 1 - v) taking v directly.

    Lets callers with a tiny v (e.g. v = 1e-100 at 40 digits) avoid the
    rounding of 1 - v to 1.
    """
    mp = ctx.mp
    a, b, c = _check_params(a, b, c)
    v = to_mpf(v, ctx)
    if v <= 0 or v >= 2:
        raise DomainError("complement argument must satisfy 0 < v < 2")
    if v >= mp.mpf(0.5):
        return gauss_2f1(a, b, c, 1 - v, ctx)
    return _hyp_near_one(a, b, c, v, ctx)


def legendre_P(nu: Rational, w, ctx: PrecisionContext):
    """Legendre function P_nu(w) (mu = 0) = 2F1(-nu, nu+1; 1; (1-w)/2)."""
    nu = as_fraction(nu)
    w = to_mpf(w, ctx)
    if w <= -1 or w > 1:
        raise DomainError("P_nu(w) needs -1 < w <= 1")
    return gauss_2f1(-nu, nu + 1, 1, (1 - w) / 2, ctx)


def cubic_z(w, ctx: PrecisionContext):
    """z(w) = 2F1(1/3, 2/3; 1; w), the cubic analogue of 2K/pi."""
    return gauss_2f1(Fraction(1, 3), Fraction(2, 3), 1, w, ctx)


def sextic_u(w, ctx: PrecisionContext):
    """u(w) = 2F1(1/6, 5/6; 1; w)."""
    return gauss_2f1(Fraction(1, 6), Fraction(5, 6), 1, w, ctx)


def cubic_z_complement(v, ctx: PrecisionContext):
    """z(1 - v) from v."""
    return gauss_2f1_complement(Fraction(1, 3), Fraction(2, 3), 1, v, ctx)


def sextic_u_complement(v, ctx: PrecisionContext):
    """u(1 - v) from v."""
    return gauss_2f1_complement(Fraction(1, 6), Fraction(5, 6), 1, v, ctx)


def hyp2f1_quarter_seven(w, ctx: PrecisionContext):
    """2F1(1/4, 7/4; 1; w) through complete elliptic integrals.

    With s = sqrt(w) and M = 2 - 2/(1+s):
        -2 (E(M) - 2 (s-1) K(M)) / (3 pi (s-1) sqrt(1+s)).
    The closed form is 0/0 at w = 0, where the series value 1 is returned.
    """
    mp = ctx.mp
    w = to_mpf(w, ctx)
    if w < 0:
        raise DomainError("formula needs 0 <= w < 1")
    if w >= 1:
        raise DomainError("2F1(1/4, 7/4; 1; w) diverges as w -> 1")
    if w == 0:
        return _hyp_series(Fraction(1, 4), Fraction(7, 4), Fraction(1), w, ctx)
    s = mp.sqrt(w)
    M = 2 - 2 / (1 + s)
    pair = ellip_KE(M, ctx)
    return -2 * (pair.E - 2 * (s - 1) * pair.K) / (3 * ctx.pi * (s - 1) * mp.sqrt(1 + s))


__all__ = [
    "ConvergenceError",
    "DomainError",
    "EllipticPair",
    "PrecisionContext",
    "agm",
    "as_fraction",
    "bernoulli",
    "cubic_z",
    "cubic_z_complement",
    "digamma",
    "ellip_E",
    "ellip_K",
    "ellip_K_complement",
    "ellip_KE",
    "gamma_fn",
    "gauss_2f1",
    "gauss_2f1_complement",
    "hyp2f1_quarter_seven",
    "legendre_P",
    "legendre_relation_residual",
    "pi_agm",
    "sextic_u",
    "sextic_u_complement",
    "sqrt_rational",
    "to_mpf",
    "zeta_even",
]
