"""Ramanujan-type 1/pi series in the sextic (1/6, 5/6) base.

For r > 1 the series

    sum_n (1/6)_n (5/6)_n (1/2)_n / n!^3 * J^n * (6n + 1 - T)

equals 3 / (pi sqrt(r) sqrt(1 - J)), with J = 4 beta_r (1 - beta_r) and T
built from k_r, a(r) and beta_r.  Every pi used as a reference or as a
target comes from the independent AGM routine in :mod:`ramapi.mpcore`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .moduli import alpha_from_theta, beta_from_alpha3r, beta_solve, elliptic_alpha, solve_m
from .mpcore import ConvergenceError, DomainError, PrecisionContext, as_fraction, sqrt_rational, to_mpf

_SIXTH = Fraction(1, 6)
_FIVE_SIXTHS = Fraction(5, 6)
_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SeriesParams:
    """Inputs and target value of one 1/pi series."""

    r: Fraction
    J: object
    T: object
    lhs: object
    digits_per_term: object


def j_invariant(beta, ctx: PrecisionContext):
    """j = 432 / (beta (1 - beta)), i.e. 1728 / J."""
    beta = to_mpf(beta, ctx)
    if beta <= 0 or beta >= 1:
        raise DomainError("j-invariant needs 0 < beta < 1")
    return 432 / (beta * (1 - beta))


def digits_per_term(J, ctx: PrecisionContext):
    """-log10 |J|: decimal digits gained by each extra term."""
    J = to_mpf(J, ctx)
    if J == 0:
        raise DomainError("J = 0 gives infinitely many digits per term")
    if abs(J) >= 1:
        raise DomainError("series diverges for |J| >= 1")
    return -ctx.mp.log10(abs(J))


def _check_r(r) -> Fraction:
    r = as_fraction(r)
    if r < 1:
        raise DomainError(f"1/pi series are only supported for r >= 1, got r = {r}")
    return r


@lru_cache(maxsize=256)
def _beta(r: Fraction, ctx: PrecisionContext):
    # beta_r from alpha_{3r} (cubic theta quotient); solver as fallback
    try:
        return beta_from_alpha3r(alpha_from_theta(3 * r, ctx), ctx)
    except (ConvergenceError, DomainError):
        return beta_solve(r, ctx)


@lru_cache(maxsize=256)
def _elliptic_parts(r: Fraction, ctx: PrecisionContext):
    m = solve_m(r, ctx)
    return m, elliptic_alpha(r, ctx, m)


def series_J(r, ctx: PrecisionContext):
    """J_r = 4 beta_r (1 - beta_r)."""
    r = _check_r(r)
    beta = _beta(r, ctx)
    return 4 * beta * (1 - beta)


def _T_formula(r: Fraction, coefficient, ctx: PrecisionContext):
    # (1 + m - coefficient * a(r)) / (sqrt(1 - m + m^2) (1 - 2 beta))
    if r == 1:
        raise DomainError("T has a pole at r = 1 (beta_1 = 1/2)")
    mp = ctx.mp
    m, a = _elliptic_parts(r, ctx)
    beta = _beta(r, ctx)
    return (1 + m - coefficient * a) / (mp.sqrt(1 - m + m * m) * (1 - 2 * beta))


def series_T(r, ctx: PrecisionContext):
    """T_r = (1 + m_r - 3 a(r) / sqrt(r)) / (sqrt(1 - m_r + m_r^2) (1 - 2 beta_r))."""
    r = _check_r(r)
    return _T_formula(r, 3 / sqrt_rational(r, ctx), ctx)


def t_lower(r, ctx: PrecisionContext):
    """t_r: T-like quantity built at r/4 but with 6/sqrt(r) in place of 3/sqrt(r/4)."""
    r = as_fraction(r)
    if r == 4:
        raise DomainError("t_r has a pole at r = 4")
    if r < 4:
        raise DomainError("t_r is only supported for r > 4")
    return _T_formula(r / 4, 6 / sqrt_rational(r, ctx), ctx)


def series_params(r, ctx: PrecisionContext) -> SeriesParams:
    r = _check_r(r)
    mp = ctx.mp
    J = series_J(r, ctx)
    T = series_T(r, ctx)
    lhs = 3 / (ctx.pi * sqrt_rational(r, ctx) * mp.sqrt(1 - J))
    return SeriesParams(r, J, T, lhs, digits_per_term(J, ctx))


def params_from_values(r, J, T, ctx: PrecisionContext) -> SeriesParams:
    """SeriesParams for caller-supplied (J, T), e.g. closed forms or typo variants."""
    r = as_fraction(r)
    mp = ctx.mp
    J, T = to_mpf(J, ctx), to_mpf(T, ctx)
    lhs = 3 / (ctx.pi * sqrt_rational(r, ctx) * mp.sqrt(1 - J))
    return SeriesParams(r, J, T, lhs, digits_per_term(J, ctx))


def sextic_series(J, slope, intercept, ctx: PrecisionContext, n_terms: int | None = None):
    """sum_n (1/6)_n (5/6)_n (1/2)_n / n!^3 * J^n * (slope n + intercept).

    With ``n_terms=None`` the sum runs until a term drops below ``ctx.eps``
    relative to the total.
    """
    mp = ctx.mp
    J = to_mpf(J, ctx)
    if abs(J) >= 1:
        raise DomainError("series diverges for |J| >= 1")
    slope, intercept = to_mpf(slope, ctx), to_mpf(intercept, ctx)
    cap = ctx.max_terms if n_terms is None else n_terms
    if cap <= 0:
        raise DomainError("n_terms must be positive")
    a, b, c = (to_mpf(x, ctx) for x in (_SIXTH, _FIVE_SIXTHS, _HALF))
    coeff = mp.one
    total = mp.zero
    for n in range(cap):
        term = coeff * (slope * n + intercept)
        total += term
        if n_terms is None and n > 0 and abs(term) <= ctx.eps * abs(total):
            return total
        coeff *= J * (n + a) * (n + b) * (n + c) / mp.mpf(n + 1) ** 3
    if n_terms is None:
        raise ConvergenceError("sextic series hit the term cap")
    return total


def ramanujan_sum(params: SeriesParams, n_terms: int, ctx: PrecisionContext):
    """First ``n_terms`` terms of sum (coefficient) J^n (6n + 1 - T).

    Precision is the caller's business: each term adds about
    ``params.digits_per_term`` digits, so ctx should carry at least that
    many digits per term.
    """
    if n_terms <= 0:
        raise DomainError("n_terms must be positive")
    return sextic_series(params.J, 6, 1 - to_mpf(params.T, ctx), ctx, n_terms)


def pi_from_sum(params: SeriesParams, total, ctx: PrecisionContext):
    """Invert the series identity: pi = 3 / (sqrt(r) sqrt(1 - J) S)."""
    mp = ctx.mp
    return 3 / (sqrt_rational(params.r, ctx) * mp.sqrt(1 - params.J) * total)


def terms_needed(r, target_digits: int, ctx: PrecisionContext | None = None) -> int:
    """N = ceil(target_digits / digits_per_term) + 2."""
    low = PrecisionContext(30) if ctx is None else ctx.with_digits(30)
    dpt = float(digits_per_term(series_J(r, low), low))
    return math.ceil(target_digits / dpt) + 2


@dataclass(frozen=True)
class PiResult:
    value: object
    r: Fraction
    target_digits: int
    n_terms: int
    working_digits: int


def compute_pi_detailed(r, target_digits: int, ctx: PrecisionContext | None = None) -> PiResult:
    if target_digits < 1:
        raise DomainError("target_digits must be positive")
    r = _check_r(r)
    if ctx is not None and ctx.digits < target_digits:
        raise DomainError("context carries fewer digits than requested")
    guard = 10 if ctx is None else ctx.guard
    n = terms_needed(r, target_digits, ctx)
    work = PrecisionContext(target_digits + 15 + math.ceil(math.log10(n)), guard=guard)
    params = series_params(r, work)
    value = pi_from_sum(params, ramanujan_sum(params, n, work), work)
    return PiResult(value, r, target_digits, n, work.digits)


def compute_pi(r, target_digits: int, ctx: PrecisionContext | None = None):
    """pi to ``target_digits`` digits from the series at r."""
    return compute_pi_detailed(r, target_digits, ctx).value


__all__ = [
    "PiResult",
    "SeriesParams",
    "compute_pi",
    "compute_pi_detailed",
    "digits_per_term",
    "j_invariant",
    "params_from_values",
    "pi_from_sum",
    "ramanujan_sum",
    "series_J",
    "series_T",
    "series_params",
    "sextic_series",
    "t_lower",
    "terms_needed",
]
