"""Acceptance criteria 1-8, each at its stated tolerance.

Each criterion prints one PASS/FAIL line.  Run under pytest, or directly
with ``python tests/test_acceptance.py`` for just the eight lines.
"""
import io
import random
import sys
import time
from fractions import Fraction

import pytest

from ramapi.cli import main as cli_main
from ramapi.corpus import ERRATUM, PASS, load_default, verify_entry
from ramapi.corpus.exact import Ref, eval_exact
from ramapi.moduli import (
    alpha_from_theta,
    alpha_solve,
    beta_from_alpha3r,
    beta_solve,
    elliptic_alpha,
    solve_m,
    solve_thm2_system,
    thm1_eval,
    thm2_inputs,
    thm3_eval,
    triplicate_alpha,
    verify_a1,
    verify_a2,
)
from ramapi.mpcore import (
    PrecisionContext,
    ellip_E,
    ellip_K,
    ellip_KE,
    gamma_fn,
    gauss_2f1,
    hyp2f1_quarter_seven,
    legendre_relation_residual,
    sextic_u,
)
from ramapi.piseries import compute_pi_detailed, digits_per_term, ramanujan_sum, series_J, series_params, series_T, t_lower
from ramapi.qseries import Nome, eis_g, eis_P, eis_Q, eis_R, hyperbolic_sum, lattice_g2, lattice_g3

THIRD, TWO_THIRDS = Fraction(1, 3), Fraction(2, 3)
ALPHA_R = list(range(1, 38)) + [40, 44, 49, 59]


def _report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()
    return ok


def criterion_1():
    t0 = time.perf_counter()
    ctx = PrecisionContext(120)
    mp = ctx.mp
    p = series_params(2, ctx)
    s = ramanujan_sum(p, 160, ctx)
    pi_series = 3 / (mp.sqrt(2) * mp.sqrt(1 - p.J) * s)
    err = abs(pi_series - ctx.pi)
    dt = time.perf_counter() - t0
    return err < mp.mpf(10) ** -100 and dt < 1.0, f"r=2, 160 terms: |pi - AGM pi| = {mp.nstr(err, 3)}, {dt:.2f}s"


def criterion_2():
    t0 = time.perf_counter()
    ctx = PrecisionContext(200)
    corpus = load_default()
    d432 = digits_per_term(eval_exact(Ref("J432"), ctx, corpus.bindings), ctx)
    d1728 = digits_per_term(eval_exact(Ref("J1728"), ctx, corpus.bindings), ctx)
    dt = time.perf_counter() - t0
    ok = 52 <= d432 <= 54 and 109 <= d1728 <= 111 and dt < 5.0
    mp = ctx.mp
    return ok, f"-log10 J432 = {mp.nstr(d432, 6)}, -log10 J1728 = {mp.nstr(d1728, 6)}, {dt:.2f}s"


def criterion_3():
    parts, ok = [], True
    for r, cap in ((1728, 7), (432, 12)):
        t0 = time.perf_counter()
        res = compute_pi_detailed(r, 500)
        dt = time.perf_counter() - t0
        ref = PrecisionContext(510)
        err = abs(ref.mp.mpf(res.value) - ref.pi)
        ok &= err < ref.mp.mpf(10) ** -500 and res.n_terms <= cap and dt < 10.0
        parts.append(f"r={r}: {res.n_terms} terms, err {ref.mp.nstr(err, 3)}, {dt:.2f}s")
    return ok, "; ".join(parts)


def criterion_4():
    t0 = time.perf_counter()
    ctx = PrecisionContext(60)
    mp = ctx.mp
    bad, worst, worst_poly = [], mp.zero, mp.zero
    for r in ALPHA_R:
        rep = verify_entry(f"alpha_{r}", ctx)
        if rep.status != PASS or not rep.rel_residual < mp.mpf(10) ** -50:
            bad.append(r)
            continue
        worst = max(worst, rep.rel_residual)
        if "poly_residual" in rep.details:
            pr = rep.details["poly_residual"]
            worst_poly = max(worst_poly, pr)
            if not pr < mp.mpf(10) ** -45:
                bad.append(r)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60.0
    return ok, (
        f"{len(ALPHA_R) - len(bad)}/41 alpha entries, max rel {mp.nstr(worst, 3)}, "
        f"max poly residual {mp.nstr(worst_poly, 3)}, {dt:.2f}s" + (f", failing r={bad}" if bad else "")
    )


def _identity_residuals(ctx):
    mp = ctx.mp
    corpus = load_default()

    def z(a):
        return gauss_2f1(THIRD, TWO_THIRDS, 1, a, ctx)

    res = {}
    for r in range(1, 6):
        a = eval_exact(corpus[f"alpha_{r}"].expr, ctx, corpus.bindings)
        zz = z(a)
        res[f"hyperbolic Q r={r}"] = abs(1 + 240 * hyperbolic_sum(3, Fraction(r, 3), ctx) - (1 + 8 * a) * zz**4)
        res[f"hyperbolic R r={r}"] = abs(1 - 504 * hyperbolic_sum(5, Fraction(r, 3), ctx) - (1 - 20 * a - 8 * a * a) * zz**6)
    for r in (1, 2, 3):
        n = Nome.of(r, ctx)
        a3 = alpha_from_theta(3 * r, ctx)
        z3 = z(a3)
        Q, R, P = eis_Q(n, ctx), eis_R(n, ctx), eis_P(n, ctx)
        x = solve_m(r, ctx)
        ke = ellip_KE(x, ctx)
        F = 2 * ke.K / ctx.pi
        sr = mp.sqrt(r)
        res[f"Q cubic r={r}"] = abs(Q - (1 + 8 * a3) * z3**4)
        res[f"R cubic r={r}"] = abs(R - (1 - 20 * a3 - 8 * a3 * a3) * z3**6)
        res[f"Q elliptic r={r}"] = abs(Q - (1 - x + x * x) * F**4)
        res[f"R elliptic r={r}"] = abs(R - (1 + x) * (1 - x / 2) * (1 - 2 * x) * F**6)
        s_r = 3 * ke.E / ke.K - 2 + x - 3 * ctx.pi / (4 * sr * ke.K**2)
        res[f"P elliptic r={r}"] = abs(P - 3 / (ctx.pi * sr) - s_r * F**2)
        res[f"s_r vs a(r) r={r}"] = abs(s_r - (1 + x - 3 * elliptic_alpha(r, ctx, x) / sr))
    for r in (1, 3, 6):
        res[f"cubic z evaluation r={r}"] = abs(thm1_eval(r, ctx) - z(alpha_from_theta(r, ctx)))
    for r in (1, 4, 16):
        b = beta_solve(r, ctx)
        u = sextic_u(b, ctx)
        n = Nome.of(r, ctx)
        res[f"u(beta) evaluation r={r}"] = abs(thm3_eval(r, ctx) - u)
        res[f"Q = u^4 r={r}"] = abs(eis_Q(n, ctx) - u**4)
        res[f"R = (1-2b) u^6 r={r}"] = abs(eis_R(n, ctx) - (1 - 2 * b) * u**6)
    for r in (1, 2, 6):
        res[f"beta via alpha_3r r={r}"] = abs(beta_from_alpha3r(alpha_from_theta(3 * r, ctx), ctx) - beta_solve(r, ctx))
    for r in (1, 3):
        res[f"a(9r) identity r={r}"] = verify_a1(r, ctx)
    res["a(81r) identity r=1"] = verify_a2(1, ctx)
    for w in (Fraction(1, 10), Fraction(1, 2)):
        res[f"2F1(1/4,7/4) w={w}"] = abs(hyp2f1_quarter_seven(w, ctx) - gauss_2f1(Fraction(1, 4), Fraction(7, 4), 1, w, ctx))
    return res


def criterion_5():
    ctx = PrecisionContext(60)
    mp = ctx.mp
    res = _identity_residuals(ctx)
    bad = [k for k, v in res.items() if not v < mp.mpf(10) ** -50]
    worst = max(res.values())
    return not bad, f"{len(res) - len(bad)}/{len(res)} identities < 1e-50, max {mp.nstr(worst, 3)}" + (
        f", failing {bad}" if bad else ""
    )


def criterion_6():
    ctx = PrecisionContext(60)
    mp = ctx.mp
    ok, parts = True, []
    for stem in ("pi_series_r2", "pi_series_r4"):
        good, printed = verify_entry(stem, ctx), verify_entry(f"{stem}_as_printed", ctx)
        code = cli_main(["verify", "--filter", f"{stem}*", "--digits", "60"], io.StringIO(), io.StringIO())
        ok &= (
            good.status == PASS
            and good.abs_residual < mp.mpf(10) ** -50
            and printed.status == ERRATUM
            and printed.abs_residual > mp.mpf(10) ** -3
            and code == 0
        )
        parts.append(
            f"{stem}: corrected {mp.nstr(good.abs_residual, 3)}, printed {mp.nstr(printed.abs_residual, 3)} "
            f"({printed.status}), exit {code}"
        )
    return ok, "; ".join(parts)


def _random_ops(rng, n):
    ops = [
        ("K", lambda x, c: ellip_K(x, c)),
        ("E", lambda x, c: ellip_E(x, c)),
        ("z", lambda x, c: gauss_2f1(THIRD, TWO_THIRDS, 1, x, c)),
        ("u", lambda x, c: sextic_u(x, c)),
        ("Gamma", lambda x, c: gamma_fn(x, c)),
        ("m_r", lambda x, c: solve_m(1 + 9 * x, c)),
        ("alpha_r", lambda x, c: alpha_solve(1 + 9 * x, c)),
        ("T_r", lambda x, c: series_T(2 + 9 * x, c)),
    ]
    for _ in range(n):
        name, fn = rng.choice(ops)
        x = Fraction(rng.randint(1, 999), 1000)
        yield name, x, fn


def criterion_7():
    ctx = PrecisionContext(60)
    checks = {}
    for r in (8, 16, 20):
        checks[f"t_{r} = T_{r}/4"] = abs(t_lower(r, ctx) - series_T(Fraction(r, 4), ctx)) < ctx.tol(3)
    for r, j in ((2, 8000), (4, 287496)):
        checks[f"1728/J_{r} = {j}"] = abs(1728 / series_J(r, ctx) - j) < ctx.tol(10) * j
    for r in (1, 2, 3):
        d = abs(triplicate_alpha(alpha_solve(r, ctx), ctx) - alpha_solve(9 * r, ctx))
        checks[f"triplication r={r}"] = d < ctx.tol(5)
    rng = random.Random(20240601)
    leg = [legendre_relation_residual(Fraction(rng.randint(1, 9999), 10000), ctx) for _ in range(20)]
    checks["Legendre relation x20"] = max(leg) < ctx.tol(3)
    lo, hi = PrecisionContext(30), PrecisionContext(60)
    stable = True
    for name, x, fn in _random_ops(rng, 10):
        a, b = fn(x, lo), fn(x, hi)
        stable &= abs(hi.mp.mpf(a) - b) < hi.mp.mpf(10) ** (-30 + 2) * max(1, abs(b))
    checks["precision doubling x10"] = stable
    bad = [k for k, v in checks.items() if not v]
    return not bad, f"{len(checks) - len(bad)}/{len(checks)} properties hold" + (f", failing {bad}" if bad else "")


def criterion_8():
    ctx = PrecisionContext(60)
    mp = ctx.mp
    parts, ok = [], True
    for r in (1, 2):
        tau = 1j * float(mp.sqrt(r))
        l2, e2 = lattice_g2(tau, 500, ctx), 60 * eis_g(2, r, ctx)
        l3, e3 = lattice_g3(tau, 500, ctx), 140 * eis_g(3, r, ctx)
        rel2 = abs(l2 / e2 - 1)
        # g3(i) = 0, so the r = 1 comparison is absolute, scaled by g2
        rel3 = abs(l3 - e3) / (abs(e3) if abs(e3) > abs(e2) * mp.mpf(10) ** -20 else abs(e2))
        t1, t2 = thm2_inputs(r, ctx)
        a, zz = solve_thm2_system(t1, t2, ctx)
        a3 = alpha_from_theta(3 * r, ctx)
        rt = max(abs(a - a3), abs(zz - gauss_2f1(THIRD, TWO_THIRDS, 1, a3, ctx)))
        ok &= rel2 < 1e-4 and rel3 < 1e-4 and rt < mp.mpf(10) ** -50
        parts.append(f"r={r}: g2 rel {mp.nstr(rel2, 2)}, g3 rel {mp.nstr(rel3, 2)}, round trip {mp.nstr(rt, 2)}")
    return ok, "; ".join(parts)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    assert _report(n, ok, detail), detail


if __name__ == "__main__":
    results = [_report(i + 1, *c()) for i, c in enumerate(CRITERIA)]
    sys.exit(0 if all(results) else 1)
