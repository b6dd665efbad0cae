"""Named numeric computations that closed forms are checked against.

Each oracle is computed from the module operations (theta quotients,
hypergeometric solvers, AGM elliptic integrals, series) and never from the
closed form it is compared with.  Arguments arrive as exact expressions:
literal rationals are passed through as Fractions, anything else is
evaluated at the working precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from ..moduli import alpha_from_theta, alpha_solve, beta_solve, duplicate_k, elliptic_alpha, solve_m
from ..mpcore import DomainError, PrecisionContext, cubic_z, gamma_fn, sextic_u
from ..piseries import _beta, series_J, series_T, sextic_series


@dataclass(frozen=True)
class Oracle:
    name: str
    arity: int
    fn: Callable
    doc: str


def _rational(x) -> Fraction:
    if not isinstance(x, Fraction):
        raise DomainError("this oracle argument must be a rational literal")
    return x


def _count(x) -> int:
    x = _rational(x)
    if x.denominator != 1 or x < 0:
        raise DomainError("expected a non-negative integer")
    return int(x)


def _m_dup(r, n, ctx):
    m = solve_m(_rational(r), ctx)
    for _ in range(_count(n)):
        m = duplicate_k(m, ctx)
    return m


def _pi_times_series(J, slope, intercept, ctx):
    return ctx.pi * sextic_series(J, slope, intercept, ctx)


def _u_beta_gamma(r, ctx):
    # (u(beta_r) pi^(3/2) / (sqrt 2 Gamma(5/4)^2))^4
    mp = ctx.mp
    u = sextic_u(beta_solve(_rational(r), ctx), ctx)
    g = gamma_fn(Fraction(5, 4), ctx)
    return (u * ctx.pi ** mp.mpf(1.5) / (mp.sqrt(2) * g * g)) ** 4


def _z3_gamma(ctx):
    # z(alpha_3) Gamma(-1/4)^2 / (8 sqrt(2 pi))
    mp = ctx.mp
    z = cubic_z(alpha_from_theta(3, ctx), ctx)
    g = gamma_fn(Fraction(-1, 4), ctx)
    return z * g * g / (8 * mp.sqrt(2 * ctx.pi))


def _z6_gamma(ctx):
    # z(alpha_6) sqrt(6 pi) Gamma(5/8) / Gamma(1/8)
    mp = ctx.mp
    z = cubic_z(alpha_from_theta(6, ctx), ctx)
    return z * mp.sqrt(6 * ctx.pi) * gamma_fn(Fraction(5, 8), ctx) / gamma_fn(Fraction(1, 8), ctx)


ORACLES: dict = {
    o.name: o
    for o in (
        Oracle("alpha_theta", 1, lambda r, c: alpha_from_theta(_rational(r), c), "(c/a)^3 cubic theta quotient"),
        Oracle("alpha_solve", 1, lambda r, c: alpha_solve(_rational(r), c), "2F1(1/3,2/3) ratio solver"),
        Oracle("m", 1, lambda r, c: solve_m(_rational(r), c), "K'/K = sqrt(r) solver"),
        Oracle("k", 1, lambda r, c: c.mp.sqrt(solve_m(_rational(r), c)), "sqrt of the m solver"),
        Oracle("m_dup", 2, _m_dup, "m_r duplicated n times (r -> 4^n r)"),
        Oracle("k_dup", 2, lambda r, n, c: c.mp.sqrt(_m_dup(r, n, c)), "k_r duplicated n times"),
        Oracle("a", 1, lambda r, c: elliptic_alpha(_rational(r), c), "elliptic alpha from E, K, pi"),
        Oracle("beta", 1, lambda r, c: _beta(_rational(r), c), "beta_r via the cubic theta quotient at 3r"),
        Oracle("beta_solve", 1, lambda r, c: beta_solve(_rational(r), c), "2F1(1/6,5/6) ratio solver"),
        Oracle("J", 1, lambda r, c: series_J(_rational(r), c), "4 beta_r (1 - beta_r)"),
        Oracle("T", 1, lambda r, c: series_T(_rational(r), c), "T_r from m_r, a(r), beta_r"),
        Oracle("pi_times_series", 3, _pi_times_series, "pi * sum c_n J^n (slope n + intercept)"),
        Oracle("u_beta_gamma", 1, _u_beta_gamma, "(u(beta_r) pi^(3/2) / (sqrt 2 Gamma(5/4)^2))^4"),
        Oracle("z3_gamma", 0, _z3_gamma, "z(alpha_3) Gamma(-1/4)^2 / (8 sqrt(2 pi))"),
        Oracle("z6_gamma", 0, _z6_gamma, "z(alpha_6) sqrt(6 pi) Gamma(5/8) / Gamma(1/8)"),
    )
}


def run_oracle(name: str, args: list, ctx: PrecisionContext):
    try:
        oracle = ORACLES[name]
    except KeyError:
        raise KeyError(f"unknown oracle {name!r}") from None
    if len(args) != oracle.arity:
        raise DomainError(f"oracle {name} takes {oracle.arity} arguments, got {len(args)}")
    return oracle.fn(*args, ctx)


__all__ = ["ORACLES", "Oracle", "run_oracle"]
