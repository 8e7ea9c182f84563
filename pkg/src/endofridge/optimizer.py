"""Maximize the cooling rate over the cold frequency at fixed ``omega_h``."""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels, _search, analytic, maser
from .core import Bath, carnot_cop, reversible_cold_frequency
from .errors import DomainError, EdgeOptimumWarning, EmptyWindowError, NoRefrigerationError

DEFAULT_TOL = 1e-9
DEFAULT_GRID = 64
# Lower edge of the maser window, as a multiple of lambda.
LAMBDA_MARGIN = 1.0 + 1e-6


@dataclass(frozen=True)
class OptimumReport:
    omega_c: float
    x_c: Optional[float]
    Q_c: float
    cop: Optional[float]
    cop_ratio: Optional[float]
    eps_carnot: Optional[float]
    evaluations: int
    bracket: tuple[float, float]
    window: tuple[float, float]
    converged: bool
    stationarity: float
    power: Optional[float] = None


def stationarity_residual(objective: Callable[[float], float], x: float, value: float, tol: float) -> float:
    """``|f(x + h) - f(x - h)| / |f(x)|`` with ``h = tol * x``."""
    h = tol * x
    return abs(objective(x + h) - objective(x - h)) / abs(value)


def maximize_cooling_rate(
    objective: Callable[[float], float],
    window: tuple[float, float],
    tol: float = DEFAULT_TOL,
    grid_size: int = DEFAULT_GRID,
    *,
    omega_h: Optional[float] = None,
    t_hot: Optional[float] = None,
    t_cold: Optional[float] = None,
    batch: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> OptimumReport:
    """Locate the global maximum of ``objective`` (a cooling rate) on an open window.

    When ``omega_h`` and both temperatures are given, the report carries the
    endoreversible COP ``omega_c / (omega_h - omega_c)`` at the optimum.
    """
    lo, hi = float(window[0]), float(window[1])
    if not 0 <= lo < hi:
        raise EmptyWindowError(f"empty search window ({lo!r}, {hi!r})")
    if not 1e-14 < tol < 1e-3:
        raise DomainError(f"tol must lie in (1e-14, 1e-3), got {tol!r}")
    if grid_size < 4:
        raise DomainError("grid_size must be at least 4")

    best = _search.maximize(objective, lo, hi, tol, grid_size, batch=batch)
    if not best.value > 0:
        raise NoRefrigerationError("cooling rate is non-positive over the whole window")
    if best.at_grid_edge:
        warnings.warn(
            f"cooling maximum at the window edge near omega_c={best.x:.6g}",
            EdgeOptimumWarning,
            stacklevel=2,
        )

    x_c = cop = ratio = eps_c = None
    if omega_h is not None and t_hot is not None and t_cold is not None:
        eps_c = carnot_cop(t_hot, t_cold)
        x_c = best.x / t_cold
        cop = best.x / (omega_h - best.x)
        ratio = cop / eps_c
    return OptimumReport(
        omega_c=best.x,
        x_c=x_c,
        Q_c=best.value,
        cop=cop,
        cop_ratio=ratio,
        eps_carnot=eps_c,
        evaluations=best.evaluations,
        bracket=best.bracket,
        window=(lo, hi),
        converged=best.converged,
        stationarity=stationarity_residual(objective, best.x, best.value, tol),
    )


def maser_window(template: maser.MaserConfig) -> tuple[float, float]:
    hi = template.omega_c_rev
    lo = template.lam * LAMBDA_MARGIN
    if not lo < hi:
        raise EmptyWindowError(
            f"driving amplitude {template.lam!r} leaves no room below omega_c,rev={hi!r}"
        )
    return lo, hi


def optimize_maser(
    template: maser.MaserConfig,
    tol: float = DEFAULT_TOL,
    grid_size: int = DEFAULT_GRID,
    fast: bool = True,
) -> OptimumReport:
    """Optimize ``omega_c`` of a maser; ``template.omega_c`` is only a placeholder.

    With ``fast`` the search runs on the batched kernels; the reported
    currents and COP are always recomputed with :func:`maser.evaluate`.
    """
    window = maser_window(template)

    if fast:
        def objective(wc: float) -> float:
            return float(_kernels.maser_currents(wc, template)[0, _kernels.COL_QC])

        def batch(grid: np.ndarray) -> np.ndarray:
            return _kernels.maser_currents(grid, template)[:, _kernels.COL_QC]
    else:
        batch = None

        def objective(wc: float) -> float:
            return maser.evaluate(template.with_cold_frequency(wc))[1].Q_c

    found = maximize_cooling_rate(objective, window, tol, grid_size, batch=batch)
    _, currents = maser.evaluate(template.with_cold_frequency(found.omega_c))
    eps_c = template.eps_carnot
    cop = currents.cop
    return dataclasses.replace(
        found,
        x_c=found.omega_c / template.cold.temperature,
        Q_c=currents.Q_c,
        cop=cop,
        cop_ratio=cop / eps_c if cop is not None else None,
        eps_carnot=eps_c,
        power=currents.power,
    )


MODELS = ("weak_driving", "high_temperature", "asymmetric")


def analytic_objective(hot: Bath, cold: Bath, omega_h: float, model: str) -> Callable[[float], float]:
    """Cooling rate ``omega_c * flux`` for one of the closed-form flux models."""
    if model == "weak_driving":
        return lambda wc: wc * analytic.weak_driving_flux(hot, cold, omega_h, wc)
    if model == "high_temperature":
        return lambda wc: wc * analytic.high_temperature_flux(hot, cold, omega_h, wc)
    if model == "asymmetric":
        x_h = omega_h / hot.temperature
        return lambda wc: wc * analytic.asymmetric_flux(cold, x_h, wc / cold.temperature)
    raise DomainError(f"unknown flux model {model!r}; expected one of {MODELS}")


def optimize_analytic(
    hot: Bath,
    cold: Bath,
    omega_h: float,
    model: str = "weak_driving",
    tol: float = DEFAULT_TOL,
    grid_size: int = DEFAULT_GRID,
) -> OptimumReport:
    objective = analytic_objective(hot, cold, omega_h, model)
    window = (0.0, reversible_cold_frequency(omega_h, hot.temperature, cold.temperature))
    return maximize_cooling_rate(
        objective,
        window,
        tol,
        grid_size,
        omega_h=omega_h,
        t_hot=hot.temperature,
        t_cold=cold.temperature,
    )
