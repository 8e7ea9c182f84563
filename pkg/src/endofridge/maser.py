"""Limit cycle of the periodically driven three-level maser.

The working medium has levels ``|1>, |2>, |3>``; the hot bath couples to
``|1> <-> |3>``, the cold bath to ``|1> <-> |2>`` and a classical field of
amplitude ``lam`` drives ``|2> <-> |3>`` on resonance (``omega_w = omega_h -
omega_c``). In the frame of the time-averaged Hamiltonian there are four open
dissipative channels, two per bath, at Bohr frequencies ``omega_c +/- lam``
(harmonic index 1 for the hot bath, 0 for the cold bath). The Lamb shift is
neglected.

Two independent routes to the stationary state are provided: the reduced
3x3 population matrix with coherences eliminated (:func:`solve_limit_cycle`)
and the null space of the full 9x9 generator
(:func:`liouvillian_steady_state_oracle`). Heat currents likewise come either
from closed expressions in the populations (:func:`heat_currents`) or from
weighted traces of the dissipators (:func:`heat_current_general`).
"""

from __future__ import annotations

import dataclasses
import functools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _precise
from ._precise import mpf
from .core import Bath, carnot_cop, relaxation_rate, reversible_cold_frequency
from .errors import DegeneracyError, DomainError, ModelViolationError, NumericalFailure

#: Populations below this value (after the solve) are treated as a solver failure.
NEGATIVE_POPULATION_LIMIT = -1e-10
#: Allowed max-norm of ``M @ n`` relative to the largest matrix entry.
RESIDUAL_LIMIT = 1e-10
#: Entropy production below this value is reported as a model violation.
SECOND_LAW_LIMIT = -1e-8


@dataclass(frozen=True)
class MaserConfig:
    omega_h: float
    omega_c: float
    lam: float
    hot: Bath
    cold: Bath

    def __post_init__(self):
        if self.hot.label != "hot" or self.cold.label != "cold":
            raise DomainError("hot and cold baths must carry the matching labels")
        if not self.lam >= 0:
            raise DomainError(f"driving amplitude must be non-negative, got {self.lam!r}")
        if not self.omega_c > self.lam:
            raise DomainError(
                f"need omega_c > lambda, got omega_c={self.omega_c!r}, lambda={self.lam!r}"
            )
        if not self.omega_h > self.omega_c:
            raise DomainError(
                f"need omega_h > omega_c, got omega_h={self.omega_h!r}, omega_c={self.omega_c!r}"
            )

    @property
    def omega_w(self) -> float:
        return self.omega_h - self.omega_c

    @property
    def x_h(self) -> float:
        return self.omega_h / self.hot.temperature

    @property
    def x_c(self) -> float:
        return self.omega_c / self.cold.temperature

    @property
    def eps_carnot(self) -> float:
        return carnot_cop(self.hot.temperature, self.cold.temperature)

    @property
    def omega_c_rev(self) -> float:
        return reversible_cold_frequency(self.omega_h, self.hot.temperature, self.cold.temperature)

    def with_cold_frequency(self, omega_c: float) -> "MaserConfig":
        return dataclasses.replace(self, omega_c=omega_c)


@dataclass(frozen=True)
class Channel:
    """One open dissipative channel.

    ``sign`` selects the Bohr frequency ``omega_c + sign * lam``; hot channels
    carry harmonic index ``q = 1`` so that their physical frequency is
    ``omega_h + sign * lam``.
    """

    bath: str
    sign: int

    def __post_init__(self):
        if self.bath not in ("hot", "cold"):
            raise DomainError(f"unknown bath {self.bath!r}")
        if self.sign not in (1, -1):
            raise DomainError(f"channel sign must be +1 or -1, got {self.sign!r}")

    @property
    def harmonic(self) -> int:
        return 1 if self.bath == "hot" else 0

    def bohr_frequency(self, config: MaserConfig) -> float:
        return config.omega_c + self.sign * config.lam

    def frequency(self, config: MaserConfig) -> float:
        return self.bohr_frequency(config) + self.harmonic * config.omega_w

    def weight(self, config: MaserConfig) -> float:
        return self.frequency(config) / self.bohr_frequency(config)


CHANNELS = (Channel("hot", 1), Channel("hot", -1), Channel("cold", 1), Channel("cold", -1))


@dataclass(frozen=True)
class TransitionRates:
    """Decay (positive frequency) and excitation (negative frequency) rates per channel."""

    hot_decay_plus: float  # omega_h + lam
    hot_excite_plus: float  # -(omega_h + lam)
    hot_decay_minus: float  # omega_h - lam
    hot_excite_minus: float  # -(omega_h - lam)
    cold_decay_plus: float
    cold_excite_plus: float
    cold_decay_minus: float
    cold_excite_minus: float

    def for_channel(self, channel: Channel) -> tuple[float, float]:
        branch = "plus" if channel.sign > 0 else "minus"
        return (
            getattr(self, f"{channel.bath}_decay_{branch}"),
            getattr(self, f"{channel.bath}_excite_{branch}"),
        )

    # Aggregates over both baths.
    @property
    def decay_plus(self) -> float:
        return self.hot_decay_plus + self.cold_decay_plus

    @property
    def decay_minus(self) -> float:
        return self.hot_decay_minus + self.cold_decay_minus

    @property
    def excite_plus(self) -> float:
        return self.hot_excite_plus + self.cold_excite_plus

    @property
    def excite_minus(self) -> float:
        return self.hot_excite_minus + self.cold_excite_minus

    @property
    def g_plus(self) -> float:
        return (self.decay_plus + self.decay_minus) / 4

    @property
    def g_minus(self) -> float:
        return (self.decay_plus - self.decay_minus) / 4

    @property
    def g_plus_neg(self) -> float:
        return (self.excite_plus + self.excite_minus) / 4

    @property
    def g_minus_neg(self) -> float:
        return (self.excite_plus - self.excite_minus) / 4

    def as_array(self) -> np.ndarray:
        return np.array(dataclasses.astuple(self))

    def g_constants(self, convert=float) -> tuple:
        """``(G+_w, G-_w, G+_-w, G-_-w)`` with every sum formed after ``convert``."""
        v = {k: convert(x) for k, x in dataclasses.asdict(self).items()}
        dp = v["hot_decay_plus"] + v["cold_decay_plus"]
        dm = v["hot_decay_minus"] + v["cold_decay_minus"]
        ep = v["hot_excite_plus"] + v["cold_excite_plus"]
        em = v["hot_excite_minus"] + v["cold_excite_minus"]
        return (dp + dm) / 4, (dp - dm) / 4, (ep + em) / 4, (ep - em) / 4


@dataclass(frozen=True)
class LimitCycle:
    n1: float
    n2: float
    n3: float
    nc: float
    residual: float
    # (n1, n2, n3, nc) as working-precision scalars, when the solver provides them.
    extended: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def populations(self) -> np.ndarray:
        return np.array([self.n1, self.n2, self.n3])

    def density_matrix(self) -> np.ndarray:
        """Stationary state with real, symmetric 2-3 coherence ``nc / 2``."""
        rho = np.diag(self.populations).astype(complex)
        rho[1, 2] = rho[2, 1] = self.nc / 2
        return rho


@dataclass(frozen=True)
class CurrentsReport:
    Q_h: float
    Q_c: float
    power: float
    flux: float
    cop: Optional[float]
    sigma: float
    # Power computed independently at the work port; differs from ``power``
    # only when the populations are not stationary.
    work_power: float
    first_law_residual: float
    # Sum of one-way energy exchanges over all channels. The net currents are
    # differences of these terms, so gross / max(|Q_h|, |Q_c|) measures how
    # strongly rounding is amplified.
    gross: float = 0.0

    @property
    def refrigerates(self) -> bool:
        return self.Q_c > 0 and self.power > 0


def averaged_hamiltonian(config: MaserConfig) -> np.ndarray:
    lam, wc = config.lam, config.omega_c
    return np.array([[0.0, 0.0, 0.0], [0.0, wc, lam], [0.0, lam, wc]])


def transition_rates(config: MaserConfig) -> TransitionRates:
    if not config.omega_c - config.lam > 0:
        raise DomainError("all channel frequencies must be positive (omega_c > lambda)")
    hot, cold, lam = config.hot, config.cold, config.lam
    wh, wc = config.omega_h, config.omega_c
    return TransitionRates(
        hot_decay_plus=relaxation_rate(hot, wh + lam),
        hot_excite_plus=relaxation_rate(hot, -(wh + lam)),
        hot_decay_minus=relaxation_rate(hot, wh - lam),
        hot_excite_minus=relaxation_rate(hot, -(wh - lam)),
        cold_decay_plus=relaxation_rate(cold, wc + lam),
        cold_excite_plus=relaxation_rate(cold, -(wc + lam)),
        cold_decay_minus=relaxation_rate(cold, wc - lam),
        cold_excite_minus=relaxation_rate(cold, -(wc - lam)),
    )


def build_coefficient_matrix(rates: TransitionRates, dtype=float) -> np.ndarray:
    """Population matrix ``M`` with the 2-3 coherence eliminated; ``dn/dt = M @ n``.

    ``dtype=object`` gives a matrix of working-precision scalars.
    """
    gp, gm, gpn, gmn = rates.g_constants(mpf if dtype is object else dtype)
    if not gp > 0:
        raise NumericalFailure("G+_omega must be positive")
    a = gm * gm / gp
    b = gm * gmn / gp
    return np.array(
        [
            [-2 * gpn + 2 * b, gp - a, gp - a],
            [gpn - b, -gp + a / 2, a / 2],
            [gpn - b, a / 2, -gp + a / 2],
        ],
        dtype=dtype,
    )


def coherence_combination(rates: TransitionRates, n: np.ndarray) -> float:
    """``n_23 + n_32`` implied by stationarity of the coherences."""
    gp, gm, _, gmn = rates.g_constants(mpf)
    return 2 * gmn / gp * n[0] - gm / gp * (n[1] + n[2])


def solve_limit_cycle(config: MaserConfig, rates: Optional[TransitionRates] = None) -> LimitCycle:
    """Stationary populations from ``M @ n = 0`` with the last row replaced by ``sum(n) = 1``.

    The double-precision LU solution is iteratively refined with residuals at
    working precision (see :mod:`endofridge._precise`).
    """
    if rates is None:
        rates = transition_rates(config)
    m = build_coefficient_matrix(rates, dtype=object)
    augmented = m.copy()
    augmented[2, :] = mpf(1)
    rhs = _precise.real_array([0, 0, 1])
    lu_matrix = _precise.to_float(augmented)
    if np.linalg.cond(lu_matrix) > 1e14:
        raise DegeneracyError("augmented population system is rank deficient")
    try:
        n = np.linalg.solve(lu_matrix, np.array([0.0, 0.0, 1.0]))
        if not np.all(np.isfinite(n)):
            raise DegeneracyError("augmented population system is rank deficient")
        n = _precise.refine(augmented, rhs, n)
    except np.linalg.LinAlgError as exc:
        raise DegeneracyError("stationary state is not unique") from exc
    scale = float(max(abs(v) for v in m.ravel()))
    residual = float(max(abs(v) for v in m @ n))
    if residual > RESIDUAL_LIMIT * scale:
        raise NumericalFailure(f"residual {residual:.3e} exceeds {RESIDUAL_LIMIT:g} * {scale:.3e}")
    if min(n) < NEGATIVE_POPULATION_LIMIT:
        raise NumericalFailure(f"negative population {float(min(n)):.3e}")
    nc = coherence_combination(rates, n)
    return LimitCycle(
        n1=float(n[0]),
        n2=float(n[1]),
        n3=float(n[2]),
        nc=float(nc),
        residual=residual,
        extended=np.array([n[0], n[1], n[2], nc], dtype=object),
    )


def _channel_quanta(decay: float, excite: float, sign: int, lc: LimitCycle):
    """Quanta absorbed from and emitted to the bath per unit time through one channel."""
    if lc.extended is not None:
        n1, n2, n3, nc = lc.extended
    else:
        n1, n2, n3, nc = (mpf(v) for v in (lc.n1, lc.n2, lc.n3, lc.nc))
    s = n2 + n3
    return mpf(excite) / 2 * n1, mpf(decay) / 4 * (s + sign * nc)


def heat_currents(
    config: MaserConfig, lc: LimitCycle, rates: Optional[TransitionRates] = None
) -> CurrentsReport:
    """Cycle-averaged heat currents; positive values flow into the maser.

    The channel exchanges cancel strongly near the reversible point and when
    one bath dominates, so the arithmetic is carried out at working precision.
    """
    if rates is None:
        rates = transition_rates(config)
    lam = mpf(config.lam)
    w_h, w_c = mpf(config.omega_h), mpf(config.omega_c)
    freqs = (w_h + lam, w_h - lam, w_c + lam, w_c - lam)
    flows = [
        _channel_quanta(rates.hot_decay_plus, rates.hot_excite_plus, 1, lc),
        _channel_quanta(rates.hot_decay_minus, rates.hot_excite_minus, -1, lc),
        _channel_quanta(rates.cold_decay_plus, rates.cold_excite_plus, 1, lc),
        _channel_quanta(rates.cold_decay_minus, rates.cold_excite_minus, -1, lc),
    ]
    jh_p, jh_m, jc_p, jc_m = (up - down for up, down in flows)
    gross = sum(w * (abs(up) + abs(down)) for w, (up, down) in zip(freqs, flows))

    q_h_ext = (w_h + lam) * jh_p + (w_h - lam) * jh_m
    q_c_ext = (w_c + lam) * jc_p + (w_c - lam) * jc_m
    work_ext = -(w_h - w_c) * (jh_p + jh_m)
    q_h, q_c = float(q_h_ext), float(q_c_ext)
    power = float(-q_h_ext - q_c_ext)
    sigma = float(-q_h_ext / mpf(config.hot.temperature) - q_c_ext / mpf(config.cold.temperature))
    return CurrentsReport(
        Q_h=q_h,
        Q_c=q_c,
        power=power,
        flux=float(q_c_ext / w_c),
        cop=q_c / power if power > 0 and q_c > 0 else None,
        sigma=sigma,
        work_power=float(work_ext),
        first_law_residual=float(q_h_ext + q_c_ext + work_ext),
        gross=float(gross),
    )


def evaluate(config: MaserConfig) -> tuple[LimitCycle, CurrentsReport]:
    rates = transition_rates(config)
    lc = solve_limit_cycle(config, rates)
    return lc, heat_currents(config, lc, rates)


def entropy_production(report: CurrentsReport, t_hot: float, t_cold: float) -> float:
    sigma = -report.Q_h / t_hot - report.Q_c / t_cold
    if sigma < SECOND_LAW_LIMIT:
        raise ModelViolationError(f"negative entropy production {sigma:.3e}")
    return sigma


# ---------------------------------------------------------------------------
# Full density-matrix route


def _jump(sign: int, dtype=float) -> np.ndarray:
    op = np.zeros((3, 3), dtype=dtype)
    op[0, 1] = 1
    op[0, 2] = sign
    return op


def _dissipator(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    op_dag = op.conj().T
    gain = op_dag @ op
    return op @ rho @ op_dag - (gain @ rho + rho @ gain) / 2


def lindblad_apply(
    config: MaserConfig,
    channel: Channel,
    rho: np.ndarray,
    rates: Optional[TransitionRates] = None,
) -> np.ndarray:
    """Action of one channel's dissipator on a 3x3 operator.

    An object-dtype ``rho`` (working-precision scalars) is handled at that
    precision.
    """
    if not isinstance(channel, Channel):
        raise DomainError(f"expected a Channel, got {channel!r}")
    rho = np.asarray(rho)
    if rho.shape != (3, 3):
        raise DomainError(f"expected a 3x3 operator, got shape {rho.shape}")
    if rates is None:
        rates = transition_rates(config)
    decay, excite = rates.for_channel(channel)
    return _channel_action(channel.sign, rho, decay, excite)


def _channel_action(sign: int, rho: np.ndarray, decay, excite) -> np.ndarray:
    if rho.dtype == object:
        decay, excite = mpf(decay), mpf(excite)
        op = _jump(sign, object)
    else:
        op = _jump(sign)
    return decay / 4 * _dissipator(op, rho) + excite / 4 * _dissipator(op.T, rho)


@functools.lru_cache(maxsize=None)
def _unit_superoperators(sign: int) -> tuple[np.ndarray, np.ndarray]:
    """Decay and excitation parts of one channel's generator at unit rate.

    Entries are small dyadic rationals, so they are exact in double.
    """
    parts = []
    for decay, excite in ((1.0, 0.0), (0.0, 1.0)):
        sup = np.zeros((9, 9))
        for k in range(9):
            basis = np.zeros(9)
            basis[k] = 1
            sup[:, k] = _channel_action(sign, basis.reshape(3, 3), decay, excite).reshape(9)
        sup.setflags(write=False)
        parts.append(sup)
    return parts[0], parts[1]


def liouvillian(
    config: MaserConfig, rates: Optional[TransitionRates] = None, dtype=complex
) -> np.ndarray:
    """9x9 generator acting on row-major ``rho.reshape(9)``.

    ``dtype=object`` assembles it from working-precision rates.
    """
    if rates is None:
        rates = transition_rates(config)
    out = np.zeros((9, 9), dtype=dtype)
    if dtype is object:
        out[:] = mpf(0)
    for ch in CHANNELS:
        decay, excite = rates.for_channel(ch)
        if dtype is object:
            decay, excite = mpf(decay), mpf(excite)
        dec_part, exc_part = _unit_superoperators(ch.sign)
        out = out + decay * dec_part + excite * exc_part
    return out


_TRACE_ROW = np.array([1, 0, 0, 0, 1, 0, 0, 0, 1])


def liouvillian_steady_state_oracle(
    config: MaserConfig, null_tol: float = 1e-11, extended: bool = False
) -> np.ndarray:
    """Stationary state from the null vector of the full generator.

    The SVD null vector is polished by iterative refinement on the system
    ``L v = 0, tr(v) = 1`` with residuals at working precision. With
    ``extended`` the state is returned as an object array at that precision.
    """
    rates = transition_rates(config)
    gen = liouvillian(config, rates)
    _, s, vh = np.linalg.svd(gen)
    if s[-1] > null_tol * s[0] or s[-2] <= null_tol * s[0]:
        raise DegeneracyError(
            f"null space dimension is not one (singular values {s[-2]:.3e}, {s[-1]:.3e})"
        )
    v = vh[-1].conj()
    v = v / (v[0] + v[4] + v[8])

    # Diagonal rows of a trace-preserving generator sum to zero, so row 0 is
    # redundant and can carry the normalization.
    system = _precise.complex_array(liouvillian(config, rates, dtype=object))
    system[0, :] = _precise.complex_array(_TRACE_ROW)
    rhs = _precise.complex_array(np.eye(9)[0])
    v = _precise.refine(system, rhs, v, complex_valued=True)
    rho = v.reshape(3, 3)
    rho = (rho + rho.conj().T) / 2
    return rho if extended else _precise.to_complex(rho)


def local_steady_state(config: MaserConfig, channel: Channel) -> np.ndarray:
    """Gibbs-like fixed point of a single channel's dissipator."""
    bath = config.hot if channel.bath == "hot" else config.cold
    beta = channel.weight(config) / bath.temperature
    energies, vecs = np.linalg.eigh(averaged_hamiltonian(config))
    boltz = np.exp(-beta * (energies - energies.min()))
    return (vecs * (boltz / boltz.sum())) @ vecs.T


def _bath_channels(bath: str):
    if bath not in ("hot", "cold"):
        raise DomainError(f"unknown bath {bath!r}")
    return [ch for ch in CHANNELS if ch.bath == bath]


def heat_current_general(config: MaserConfig, rho: np.ndarray, bath: str) -> float:
    """Weighted-trace heat current of ``bath`` for a stationary state ``rho``.

    Evaluated at working precision: the channels of a bath can carry large
    opposite exchanges whose sum is small.
    """
    channels = _bath_channels(bath)
    rates = transition_rates(config)
    rho = np.asarray(rho)
    if rho.dtype != object:
        rho = _precise.complex_array(rho)
    h_bar = _precise.real_array(averaged_hamiltonian(config))
    total = mpf(0)
    for ch in channels:
        bohr = mpf(config.omega_c) + ch.sign * mpf(config.lam)
        weight = (bohr + ch.harmonic * (mpf(config.omega_h) - mpf(config.omega_c))) / bohr
        total += weight * np.trace(h_bar @ lindblad_apply(config, ch, rho, rates)).real
    return float(total)


def heat_current_entropic(config: MaserConfig, rho: np.ndarray, bath: str) -> float:
    """Heat current as ``-T sum tr(L[rho] log rho_local)`` over the bath's channels."""
    channels = _bath_channels(bath)
    rates = transition_rates(config)
    temperature = config.hot.temperature if bath == "hot" else config.cold.temperature
    total = 0.0
    for ch in channels:
        w, v = np.linalg.eigh(local_steady_state(config, ch))
        log_local = (v * np.log(w)) @ v.T
        total += np.trace(lindblad_apply(config, ch, rho, rates) @ log_local).real
    return float(-temperature * total)
