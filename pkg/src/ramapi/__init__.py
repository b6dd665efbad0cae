"""Arbitrary-precision singular moduli and Ramanujan-type 1/pi series.

Modules:

- ``mpcore``: precision contexts, AGM, elliptic integrals, 2F1, Gamma
- ``qseries``: Eisenstein series, lattice sums, cubic theta functions
- ``moduli``: singular moduli solvers and modular transformations
- ``piseries``: J_r, T_r and the sextic 1/pi series
- ``corpus``: exact closed forms and their numeric verification
- ``cli``: command-line interface
"""
from .mpcore import ConvergenceError, DomainError, PrecisionContext
from .moduli import ModulusRecord, alpha_from_theta, alpha_solve, beta_solve, modulus_record, solve_m
from .piseries import SeriesParams, compute_pi, ramanujan_sum, series_J, series_T, series_params

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "ModulusRecord",
    "PrecisionContext",
    "SeriesParams",
    "alpha_from_theta",
    "alpha_solve",
    "beta_solve",
    "compute_pi",
    "modulus_record",
    "ramanujan_sum",
    "series_J",
    "series_T",
    "series_params",
    "solve_m",
]
