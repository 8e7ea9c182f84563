"""Grid bracketing and golden-section refinement for scalar maximization."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
# Smallest log-grid point, relative to the upper edge, when the window starts at 0.
LOG_FLOOR = 1e-6
# Finite-difference step for the Newton polish, relative to x (~ eps**(1/3)).
POLISH_STEP = 6e-6
POLISH_ITER = 3


@dataclass(frozen=True)
class Maximum:
    x: float
    value: float
    bracket: tuple[float, float]
    evaluations: int
    converged: bool
    at_grid_edge: bool


def search_grid(lo: float, hi: float, size: int) -> np.ndarray:
    """Union of log- and lin-spaced points strictly inside ``(lo, hi)``."""
    half = max(size // 2, 2)
    lin = np.linspace(lo, hi, size - half + 2)[1:-1]
    log_lo = lo if lo > 0 else hi * LOG_FLOOR
    log = np.geomspace(log_lo, hi, half + 2)[1:-1]
    pts = np.union1d(lin, log)
    return pts[(pts > lo) & (pts < hi)]


def _clean(v: float) -> float:
    return v if math.isfinite(v) else -math.inf


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, rel_tol: float, max_iter: int = 500
) -> tuple[float, float, int, bool]:
    """Shrink ``[a, b]`` around a maximum of ``f`` until its width is ``rel_tol * b``.

    Returns ``(x_best, f_best, evaluations, converged)``.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = _clean(f(c)), _clean(f(d))
    evals = 2
    converged = False
    for _ in range(max_iter):
        if b - a <= rel_tol * max(abs(a), abs(b)):
            converged = True
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = _clean(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = _clean(f(d))
        evals += 1
    if fc >= fd:
        return c, fc, evals, converged
    return d, fd, evals, converged


def newton_polish(
    f: Callable[[float], float], x: float, fx: float, lo: float, hi: float
) -> tuple[float, float, int]:
    """Refine a located maximum with Newton steps on the centered-difference slope.

    Comparing function values cannot place a smooth maximum closer than
    ~sqrt(eps); the slope can. A step is kept only if the curvature is
    negative, the step stays within a few difference widths and the value
    does not drop beyond round-off, so noisy objectives fall back to ``x``.
    """
    evals = 0
    for _ in range(POLISH_ITER):
        h = POLISH_STEP * abs(x)
        if not (h > 0 and lo < x - h and x + h < hi):
            break
        fp, fm = _clean(f(x + h)), _clean(f(x - h))
        evals += 2
        curvature = fp - 2 * fx + fm
        if not (math.isfinite(fp) and math.isfinite(fm) and curvature < 0):
            break
        step = -h * (fp - fm) / (2 * curvature)
        if abs(step) > 4 * h:
            break
        x_new = x + step
        f_new = _clean(f(x_new))
        evals += 1
        if not f_new >= fx - 8 * np.finfo(float).eps * abs(fx):
            break
        done = abs(step) <= 1e-12 * abs(x)
        x, fx = x_new, f_new
        if done:
            break
    return x, fx, evals


def maximize(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float,
    grid_size: int = 64,
    batch: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> Maximum:
    """Global grid scan on ``(lo, hi)`` followed by golden-section refinement.

    Grid ties resolve toward the larger abscissa.
    """
    grid = search_grid(lo, hi, grid_size)
    if batch is not None:
        values = np.asarray(batch(grid), dtype=float)
    else:
        values = np.array([f(x) for x in grid], dtype=float)
    values = np.where(np.isfinite(values), values, -np.inf)
    i = len(values) - 1 - int(np.argmax(values[::-1]))
    left = grid[i - 1] if i > 0 else lo
    right = grid[i + 1] if i < len(grid) - 1 else hi
    x, fx, evals, converged = golden_section_max(f, left, right, rel_tol)
    if values[i] > fx:
        x, fx = float(grid[i]), float(values[i])
    x, fx, polish_evals = newton_polish(f, x, fx, left, right)
    return Maximum(
        x=float(x),
        value=float(fx),
        bracket=(float(left), float(right)),
        evaluations=len(grid) + evals + polish_evals,
        converged=converged,
        at_grid_edge=i in (0, len(grid) - 1),
    )
