"""Physical primitives in natural units (hbar = k_B = 1).

Occupations, KMS-consistent relaxation rates of unstructured bosonic baths,
thermodynamic forces, Carnot quantities and the reversible frequency window.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, WeakCouplingWarning

#: Largest bath dimensionality accepted by :class:`Bath`.
MAX_DIMENSION = 3
#: When True, :class:`Bath` accepts any real ``d`` in ``(0, MAX_DIMENSION]``.
ALLOW_REAL_DIMENSION = False
#: Ratio gamma/T above which the weak-coupling assumption is flagged.
WEAK_COUPLING_LIMIT = 1e-2


@dataclass(frozen=True)
class Bath:
    """Thermal reservoir with a flat spectral density in ``dimension`` dimensions."""

    temperature: float
    gamma: float
    dimension: int = 3
    label: str = "hot"

    def __post_init__(self):
        if not self.temperature > 0:
            raise DomainError(f"bath temperature must be positive, got {self.temperature!r}")
        if not self.gamma > 0:
            raise DomainError(f"dissipation strength must be positive, got {self.gamma!r}")
        if self.label not in ("hot", "cold"):
            raise DomainError(f"bath label must be 'hot' or 'cold', got {self.label!r}")
        d = self.dimension
        if ALLOW_REAL_DIMENSION:
            if not 0 < d <= MAX_DIMENSION:
                raise DomainError(f"dimension must lie in (0, {MAX_DIMENSION}], got {d!r}")
        else:
            if isinstance(d, bool) or int(d) != d or not 1 <= d <= MAX_DIMENSION:
                raise DomainError(f"dimension must be an integer in [1, {MAX_DIMENSION}], got {d!r}")
            object.__setattr__(self, "dimension", int(d))
        if not self.weakly_coupled:
            warnings.warn(
                f"gamma/T = {self.gamma / self.temperature:.3g} >= {WEAK_COUPLING_LIMIT}; "
                "the weak-coupling master equation may be inaccurate",
                WeakCouplingWarning,
                stacklevel=3,
            )

    @property
    def weakly_coupled(self) -> bool:
        return self.gamma / self.temperature < WEAK_COUPLING_LIMIT

    def rate(self, omega: float) -> float:
        return relaxation_rate(self, omega)


@dataclass(frozen=True)
class ForcePair:
    """Thermodynamic forces conjugate to the quanta flux at the hot and cold ports."""

    x_h: float
    x_c: float

    def __post_init__(self):
        if not (self.x_h > 0 and self.x_c > 0):
            raise DomainError(f"forces must be positive, got x_h={self.x_h!r}, x_c={self.x_c!r}")

    @property
    def refrigerates(self) -> bool:
        return self.x_c < self.x_h


def planck_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation ``1 / (exp(omega/T) - 1)``."""
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega!r}")
    if not temperature > 0:
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    x = omega / temperature
    if x > 700.0:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def relaxation_rate(bath: Bath, omega: float) -> float:
    """Rate ``gamma * omega**d * (N(omega) + 1)`` for ``omega > 0``.

    Negative frequencies are excitation rates obtained from the decay rate by
    the KMS factor ``exp(-|omega|/T)``.
    """
    if omega == 0:
        raise DomainError("zero-frequency channel is singular")
    w = abs(omega)
    x = w / bath.temperature
    decay = bath.gamma * w**bath.dimension / -math.expm1(-x)
    if omega > 0:
        return decay
    return math.exp(-x) * decay


def thermodynamic_force(omega: float, temperature: float) -> float:
    if not temperature > 0:
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    return omega / temperature


def _check_temperatures(t_hot: float, t_cold: float) -> None:
    if not t_cold > 0:
        raise DomainError(f"cold temperature must be positive, got {t_cold!r}")
    if not t_hot > t_cold:
        raise DomainError(f"need T_h > T_c for refrigeration, got T_h={t_hot!r}, T_c={t_cold!r}")


def carnot_quantities(t_hot: float, t_cold: float) -> tuple[float, float]:
    """Return ``(eta_C, eps_C)``: Carnot efficiency and Carnot COP."""
    _check_temperatures(t_hot, t_cold)
    return 1.0 - t_cold / t_hot, t_cold / (t_hot - t_cold)


def carnot_cop(t_hot: float, t_cold: float) -> float:
    return carnot_quantities(t_hot, t_cold)[1]


def reversible_cold_frequency(omega_h: float, t_hot: float, t_cold: float) -> float:
    """Upper edge ``omega_h * T_c / T_h`` of the refrigeration window."""
    if not omega_h > 0:
        raise DomainError(f"hot frequency must be positive, got {omega_h!r}")
    _check_temperatures(t_hot, t_cold)
    return omega_h * t_cold / t_hot
