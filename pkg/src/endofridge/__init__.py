"""Optimal cooling performance of endoreversible quantum refrigerators."""

from .core import Bath, carnot_quantities, planck_occupation, relaxation_rate
from .maser import MaserConfig, evaluate, solve_limit_cycle
from .optimizer import optimize_analytic, optimize_maser

__version__ = "0.1.0"

__all__ = [
    "Bath",
    "MaserConfig",
    "carnot_quantities",
    "evaluate",
    "optimize_analytic",
    "optimize_maser",
    "planck_occupation",
    "relaxation_rate",
    "solve_limit_cycle",
]
