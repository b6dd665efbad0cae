"""q-expansions: Eisenstein series, lattice sums, cubic theta functions.

Every q-power is formed as ``exp(n * log_q)`` from an exactly known
``log_q = -pi*sqrt(r)`` (or ``-2*pi*sqrt(r/3)`` for the cubic nome) rather
than by repeated multiplication of a rounded q.  The functions accept either
a plain real ``q`` or a :class:`Nome`; a Nome carries its exact logarithm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .mpcore import (
    ConvergenceError,
    DomainError,
    PrecisionContext,
    as_fraction,
    bernoulli,
    sqrt_rational,
    to_mpf,
    zeta_even,
)


@dataclass(frozen=True)
class Nome:
    """The nomes attached to a positive rational r.

    ``q = exp(-pi sqrt(r))`` is the classical nome and
    ``q_cubic = exp(-2 pi sqrt(r/3))`` the one fed to the cubic theta
    functions.  Both are built from r directly.
    """

    r: Fraction
    ctx: PrecisionContext

    @classmethod
    def of(cls, r, ctx: PrecisionContext) -> "Nome":
        r = as_fraction(r)
        if r <= 0:
            raise DomainError("r must be positive")
        return cls(r, ctx)

    @property
    def log_q(self):
        return -self.ctx.pi * sqrt_rational(self.r, self.ctx)

    @property
    def log_q_cubic(self):
        return -2 * self.ctx.pi * sqrt_rational(self.r / 3, self.ctx)

    @property
    def q(self):
        return self.ctx.mp.exp(self.log_q)

    @property
    def q_cubic(self):
        return self.ctx.mp.exp(self.log_q_cubic)

    def squared(self) -> "_LogNome":
        """The nome q**2 = exp(-2 pi sqrt(r)) summed over by P, Q, R."""
        return _LogNome(2 * self.log_q)

    def cubic(self) -> "_LogNome":
        return _LogNome(self.log_q_cubic)


@dataclass(frozen=True)
class _LogNome:
    log: object


def _log_of(q, ctx: PrecisionContext):
    """Return log(q) for a Nome-like or numeric q, validating 0 <= q < 1."""
    mp = ctx.mp
    if isinstance(q, Nome):
        return mp.mpf(q.log_q)
    if isinstance(q, _LogNome):
        return mp.mpf(q.log)
    q = to_mpf(q, ctx)
    if q >= 1:
        raise DomainError("nome must satisfy 0 <= q < 1")
    if q < 0:
        raise DomainError("negative nome is not supported")
    if q == 0:
        return mp.ninf
    return mp.log(q)


def lambert_sum(power: int, log_x, ctx: PrecisionContext):
    """sum_{n>=1} n**power x**n / (1 - x**n) with x = exp(log_x)."""
    mp = ctx.mp
    if log_x == mp.ninf:
        return mp.zero
    if log_x >= 0:
        raise DomainError("Lambert series needs 0 < x < 1")
    total = mp.zero
    eps = ctx.eps
    for n in range(1, ctx.max_terms):
        xn = mp.exp(n * log_x)
        term = mp.mpf(n) ** power * xn / (1 - xn)
        total += term
        if term <= eps * total:
            return total
    raise ConvergenceError("Lambert series hit the term cap")


def _eisenstein(power: int, scale: int, q, ctx: PrecisionContext):
    # q enters as q**2: the sums run over q^(2n)
    return 1 + scale * lambert_sum(power, 2 * _log_of(q, ctx), ctx)


def eis_P(q, ctx: PrecisionContext):
    """P(q^2) = 1 - 24 sum n q^(2n) / (1 - q^(2n))."""
    return _eisenstein(1, -24, q, ctx)


def eis_Q(q, ctx: PrecisionContext):
    """Q(q^2) = 1 + 240 sum n^3 q^(2n) / (1 - q^(2n))."""
    return _eisenstein(3, 240, q, ctx)


def eis_R(q, ctx: PrecisionContext):
    """R(q^2) = 1 - 504 sum n^5 q^(2n) / (1 - q^(2n))."""
    return _eisenstein(5, -504, q, ctx)


@dataclass(frozen=True)
class EisensteinTriple:
    P: object
    Q: object
    R: object

    @property
    def discriminant(self):
        """Q**3 - R**2, positive for real 0 < q < 1."""
        return self.Q**3 - self.R**2

    @property
    def j(self):
        return 1728 * self.Q**3 / self.discriminant


def eisenstein_triple(r, ctx: PrecisionContext) -> EisensteinTriple:
    """P, Q, R at q^2 with q = exp(-pi sqrt(r))."""
    nome = Nome.of(r, ctx)
    return EisensteinTriple(eis_P(nome, ctx), eis_Q(nome, ctx), eis_R(nome, ctx))


def hyperbolic_sum(s: int, r, ctx: PrecisionContext):
    """sum_{n>=1} n**s / (exp(2 pi n sqrt(r)) - 1)."""
    if s not in (1, 3, 5):
        raise DomainError("hyperbolic_sum supports s in {1, 3, 5}")
    nome = Nome.of(r, ctx)
    return lambert_sum(s, 2 * nome.log_q, ctx)


def eis_g(nu: int, r, ctx: PrecisionContext):
    """g_nu(r) = 2 zeta(2nu) - (8 nu zeta(2nu) / B_2nu) sum n^(2nu-1) q1^n / (1 - q1^n).

    Here q1 = exp(2 pi i tau) with tau = i sqrt(r), so q1 = exp(-2 pi sqrt(r))
    and everything is real.  g_2 and g_3 are the weight-4 and weight-6
    lattice sums sum' (m tau + n)^(-2 nu).
    """
    if nu < 2:
        raise DomainError("eis_g needs nu >= 2")
    z = zeta_even(nu, ctx)
    b = to_mpf(bernoulli(2 * nu), ctx)
    tail = hyperbolic_sum(2 * nu - 1, r, ctx) if nu <= 3 else lambert_sum(
        2 * nu - 1, 2 * Nome.of(r, ctx).log_q, ctx
    )
    return 2 * z - 8 * nu * z / b * tail


def _imag_part(tau) -> float:
    tau = complex(tau)
    if tau.real != 0 or tau.imag <= 0:
        raise DomainError("tau must be purely imaginary with positive imaginary part")
    return tau.imag


def _lattice_sum(weight: int, s: float, M: int, half: bool = False) -> float:
    """sum over (m, n) != (0, 0), |m|, |n| <= M of (m tau + n)^(-weight), tau = i s.

    Float64 only: these sums are low-precision oracles for the q-series.
    The real part of (n - i m s)^w / (n^2 + m^2 s^2)^w is expanded by the
    binomial theorem; the imaginary parts cancel between m and -m.
    """
    ms = np.arange(-M, M + 1, dtype=np.float64)
    n = ms[None, :]
    ys = (ms * s)[:, None]
    norm = n * n + ys * ys
    real = np.zeros_like(norm)
    # Re (n - i y)^w = sum_{j even} C(w, j) n^(w-j) (-1)^(j/2) y^j
    for j in range(0, weight + 1, 2):
        real += math.comb(weight, j) * (-1) ** (j // 2) * n ** (weight - j) * ys**j
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = real / norm**weight
    terms[M, M] = 0.0
    if half:
        # (m, n) and (-m, -n) contribute equally: keep m > 0 plus the m = 0, n > 0 row
        upper = terms[M + 1 :, :]
        axis = terms[M, M + 1 :]
        return 2.0 * (math.fsum(upper.ravel()) + math.fsum(axis))
    return math.fsum(terms.ravel())


def lattice_g2(tau, M: int, ctx: PrecisionContext, half: bool = False):
    """g2*(tau) = 60 sum' (m tau + n)^-4 for purely imaginary tau, |m|,|n| <= M.

    Tail error is O(M**-2).
    """
    if M < 10:
        raise DomainError("truncation radius M must be >= 10")
    return ctx.mp.mpf(60 * _lattice_sum(4, _imag_part(tau), M, half))


def lattice_g3(tau, M: int, ctx: PrecisionContext, half: bool = False):
    """g3*(tau) = 140 sum' (m tau + n)^-6, truncated; tail error O(M**-4)."""
    if M < 10:
        raise DomainError("truncation radius M must be >= 10")
    return ctx.mp.mpf(140 * _lattice_sum(6, _imag_part(tau), M, half))


def theta_radius(log_q, ctx: PrecisionContext) -> int:
    """Truncation radius for the cubic theta double sums.

    m^2 + mn + n^2 >= (m^2 + n^2)/2, so terms with max(|m|,|n|) > M are below
    q^(M^2/2); M is chosen to push that under 10^-(digits+guard).
    """
    decay = -float(log_q)
    need = ctx.dps * math.log(10)
    return int(math.ceil(math.sqrt(need / (decay * 0.5)))) + 1


def _cubic_double_sum(log_q, shift: Fraction, ctx: PrecisionContext):
    mp = ctx.mp
    M = theta_radius(log_q, ctx)
    sh = to_mpf(shift, ctx)
    total = mp.zero
    # fixed (m, n) order keeps results bit-reproducible
    for m in range(-M, M + 1):
        x = m + sh
        for n in range(-M, M + 1):
            y = n + sh
            total += mp.exp(log_q * (x * x + x * y + y * y))
    return total


def cubic_theta_a(q, ctx: PrecisionContext):
    """a(q) = sum_{m,n} q^(m^2 + mn + n^2)."""
    log_q = _log_of(q, ctx)
    if log_q == ctx.mp.ninf:
        return ctx.mp.one
    return _cubic_double_sum(log_q, Fraction(0), ctx)


def cubic_theta_c(q, ctx: PrecisionContext):
    """c(q) = sum_{m,n} q^((m+1/3)^2 + (m+1/3)(n+1/3) + (n+1/3)^2)."""
    log_q = _log_of(q, ctx)
    if log_q == ctx.mp.ninf:
        return ctx.mp.zero
    return _cubic_double_sum(log_q, Fraction(1, 3), ctx)


__all__ = [
    "EisensteinTriple",
    "Nome",
    "cubic_theta_a",
    "cubic_theta_c",
    "eis_P",
    "eis_Q",
    "eis_R",
    "eis_g",
    "eisenstein_triple",
    "hyperbolic_sum",
    "lambert_sum",
    "lattice_g2",
    "lattice_g3",
    "theta_radius",
]
