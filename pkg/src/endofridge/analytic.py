"""Closed-form fluxes and optimal-performance benchmarks.

Includes the weak-driving flux of the maser, its high-temperature and
asymmetric-dissipation limits, COP formulas, the optimal COP as a function of
the coefficient ``C`` (``x_c* ~= C x_h``), classic benchmarks for comparison,
and a numerical estimator of ``C`` for an arbitrary flux.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import _search
from .core import Bath, relaxation_rate
from .errors import BracketError, DomainError

Flux = Callable[[float, float], float]


def _check_frequencies(omega_h: float, omega_c: float) -> None:
    if not omega_h > omega_c > 0:
        raise DomainError(f"need omega_h > omega_c > 0, got {omega_h!r}, {omega_c!r}")


def weak_driving_flux(hot: Bath, cold: Bath, omega_h: float, omega_c: float) -> float:
    """Stationary quanta flux of the maser in the limit of vanishing driving."""
    _check_frequencies(omega_h, omega_c)
    g_h = relaxation_rate(hot, omega_h)
    g_c = relaxation_rate(cold, omega_c)
    gn_h = relaxation_rate(hot, -omega_h)
    gn_c = relaxation_rate(cold, -omega_c)
    x_h = omega_h / hot.temperature
    x_c = omega_c / cold.temperature
    # g_h*gn_c - gn_h*g_c == g_h*g_c*(exp(-x_c) - exp(-x_h)) by KMS; this
    # form keeps full relative precision close to x_c == x_h.
    numerator = -g_h * g_c * math.exp(-x_c) * math.expm1(x_c - x_h)
    return numerator / (g_h + g_c + 2 * (gn_h + gn_c))


def high_temperature_flux(hot: Bath, cold: Bath, omega_h: float, omega_c: float) -> float:
    _check_frequencies(omega_h, omega_c)
    t_h, t_c = hot.temperature, cold.temperature
    d_h, d_c = hot.dimension, cold.dimension
    force_gap = omega_h / t_h - omega_c / t_c
    denom = hot.gamma + omega_c ** (d_c - 1) * omega_h ** (1 - d_h) * cold.gamma * t_c / t_h
    return hot.gamma * cold.gamma / 3 * t_c * omega_c ** (d_c - 1) * force_gap / denom


def asymmetric_flux(cold: Bath, x_h: float, x_c: float) -> float:
    """High-temperature flux when the hot contact dominates (``gamma_c << gamma_h``)."""
    if not (x_h > 0 and x_c > 0):
        raise DomainError(f"forces must be positive, got x_h={x_h!r}, x_c={x_c!r}")
    d = cold.dimension
    prefactor = cold.gamma * cold.temperature**d / 3
    return prefactor * (x_c ** (d - 1) * x_h - x_c**d)


def cop_from_forces(x_h: float, x_c: float, eps_carnot: float) -> float:
    if not (x_h > 0 and x_c > 0 and eps_carnot > 0):
        raise DomainError("forces and Carnot COP must be positive")
    inverse = (eps_carnot + 1) / eps_carnot * x_h / x_c - 1
    if inverse == 0:
        raise DomainError("COP undefined: forces outside the refrigeration window")
    return 1.0 / inverse


def cop_from_frequencies(omega_h: float, omega_c: float) -> float:
    _check_frequencies(omega_h, omega_c)
    return omega_c / (omega_h - omega_c)


def optimal_cop_from_C(C: float, eps_carnot: float) -> float:
    """Normalized optimal COP ``eps*/eps_C`` given ``x_c* = C x_h``."""
    if not 0 <= C <= 1:
        raise DomainError(f"C must lie in [0, 1], got {C!r}")
    if not eps_carnot > 0:
        raise DomainError(f"Carnot COP must be positive, got {eps_carnot!r}")
    return C / ((1 - C) * eps_carnot + 1)


def benchmark_cop(d: float, eps_carnot: float) -> float:
    """Normalized COP at maximum cooling power for unstructured baths in ``d`` dimensions."""
    return d / (d + 1 + eps_carnot)


def ynca_efficiency(eta_carnot: float) -> float:
    """Efficiency at maximum power of an endoreversible engine with Newtonian contacts."""
    if not 0 <= eta_carnot < 1:
        raise DomainError(f"Carnot efficiency must lie in [0, 1), got {eta_carnot!r}")
    return 1 - math.sqrt(1 - eta_carnot)


def chi_optimal_cop(eps_carnot: float) -> float:
    """Optimal COP under the ``eps * Q_c`` figure of merit."""
    if not eps_carnot >= 0:
        raise DomainError(f"Carnot COP must be non-negative, got {eps_carnot!r}")
    return math.sqrt(1 + eps_carnot) - 1


@dataclass(frozen=True)
class OnsagerParams:
    """Linear-response kinetic coefficients; only the coupling ``q`` enters the COP."""

    q: float
    L11: Optional[float] = None
    L12: Optional[float] = None
    L21: Optional[float] = None
    L22: Optional[float] = None

    def __post_init__(self):
        if self.q**2 > 1:
            raise DomainError(f"coupling must satisfy q^2 <= 1, got q={self.q!r}")
        coeffs = (self.L11, self.L12, self.L21, self.L22)
        if all(c is not None for c in coeffs):
            if self.L11 < 0 or self.L22 < 0:
                raise DomainError("diagonal Onsager coefficients must be non-negative")
            if not math.isclose(self.L12, self.L21, rel_tol=1e-12, abs_tol=0.0):
                raise DomainError("Onsager reciprocity requires L12 == L21")

    @classmethod
    def from_coefficients(cls, L11: float, L12: float, L22: float) -> "OnsagerParams":
        if L11 <= 0 or L22 <= 0:
            raise DomainError("L11 and L22 must be positive to define q")
        q = math.copysign(math.sqrt(L12**2 / (L11 * L22)), L12)
        return cls(q=q, L11=L11, L12=L12, L21=L12, L22=L22)

    def optimal_cold_force(self, x_h: float) -> float:
        if self.L21 is None or self.L22 is None:
            raise DomainError("full coefficients are required for the optimal force")
        return -self.L21 * x_h / (2 * self.L22)


def onsager_optimal_cop(params: OnsagerParams, eps_carnot: float) -> float:
    if not eps_carnot > 0:
        raise DomainError(f"Carnot COP must be positive, got {eps_carnot!r}")
    q2 = params.q**2
    return q2 * eps_carnot / ((4 - 3 * q2) * eps_carnot + (4 - 2 * q2))


@dataclass(frozen=True)
class CoefficientC:
    """Extrapolated ``lim x_c*/x_h`` with the raw ratios and Richardson table."""

    value: float
    order: int
    residual: float
    converged: bool
    x_h: tuple[float, ...] = field(default=())
    ratios: tuple[float, ...] = field(default=())
    table: tuple[tuple[float, ...], ...] = field(default=())


DEFAULT_SCHEDULE = tuple(0.1 / 2**k for k in range(6))


def optimal_force_ratio(flux: Flux, x_h: float, rel_tol: float = 1e-12) -> float:
    """``x_c*/x_h`` maximizing ``x_c * flux(x_h, x_c)`` on ``(0, x_h)``."""
    best = _search.maximize(lambda xc: xc * flux(x_h, xc), 0.0, x_h, rel_tol)
    if not best.value > 0:
        raise BracketError(f"no cooling maximum found at x_h={x_h!r}")
    if best.at_grid_edge:
        raise BracketError(f"maximum at the window edge for x_h={x_h!r}")
    return best.x / x_h


def estimate_C(
    flux: Flux,
    x_h_schedule: Sequence[float] = DEFAULT_SCHEDULE,
    accept: float = 1e-4,
    max_order: int = 2,
) -> CoefficientC:
    """Richardson-extrapolate ``x_c*/x_h`` to ``x_h -> 0``.

    The schedule must decrease geometrically; the leading error is assumed
    first order in ``x_h`` with integer powers beyond.
    """
    xs = [float(x) for x in x_h_schedule]
    if len(xs) < 2 or any(x <= 0 for x in xs):
        raise DomainError("schedule needs at least two positive entries")
    ratio = xs[0] / xs[1]
    if ratio <= 1 or any(not math.isclose(a / b, ratio, rel_tol=1e-9) for a, b in zip(xs, xs[1:])):
        raise DomainError("schedule must decrease by a constant factor")

    ratios = [optimal_force_ratio(flux, x) for x in xs]
    table = [list(ratios)]
    for p in range(1, max_order + 1):
        prev = table[-1]
        if len(prev) < 2:
            break
        s = ratio**p
        table.append([(s * b - a) / (s - 1) for a, b in zip(prev, prev[1:])])

    best = table[-1]
    order = len(table) - 1
    residual = abs(best[-1] - best[-2]) if len(best) > 1 else abs(table[-2][-1] - best[-1])
    value = best[-1]
    return CoefficientC(
        value=value,
        order=order,
        residual=residual,
        converged=residual < accept and 0 <= value <= 1,
        x_h=tuple(xs),
        ratios=tuple(ratios),
        table=tuple(tuple(row) for row in table),
    )
