"""Randomized optimization sweeps, benchmark curves and CSV output.

Random streams: sample ``i`` of a sweep with seed ``s`` draws from
``numpy.random.Generator(PCG64(SeedSequence(s, spawn_key=(i,))))``. Each
sample therefore owns an independent stream and results do not depend on
the order or parallelism with which samples are processed.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO, Union

import numpy as np

from . import analytic, optimizer
from .core import Bath, carnot_cop, reversible_cold_frequency
from .errors import EndofridgeError, SpecError
from .maser import MaserConfig

MAX_REJECTIONS = 1000
LOW_EPS_THRESHOLD = 0.05


@dataclass(frozen=True)
class SweepSpec:
    """Sampling ranges for a sweep.

    ``gamma_*`` and ``omega_h`` ranges are relative to the bath temperature
    (``gamma_h = r * T_h`` with ``r`` drawn from ``gamma_hot``). All draws are
    log-uniform; a range with equal ends yields that value exactly.
    """

    samples: int = 2000
    seed: int = 0
    d: int = 3
    t_hot: tuple[float, float] = (0.5, 50.0)
    t_cold: tuple[float, float] = (0.1, 50.0)
    t_cold_max_ratio: float = 0.99
    gamma_hot: tuple[float, float] = (1e-5, 1e-2)
    gamma_cold: tuple[float, float] = (1e-5, 1e-2)
    omega_h: tuple[float, float] = (1e-3, 0.5)
    lambda_mode: str = "ratio"
    lambda_ratio: float = 1e-3
    max_x_h: float = 0.1
    max_gamma_ratio: float = 1e-2
    tol: float = optimizer.DEFAULT_TOL
    grid_size: int = optimizer.DEFAULT_GRID

    def __post_init__(self):
        if self.samples < 0:
            raise SpecError("sample count must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise SpecError("seed must fit in 64 unsigned bits")
        for name in ("t_hot", "t_cold", "gamma_hot", "gamma_cold", "omega_h"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise SpecError(f"range {name}=({lo!r}, {hi!r}) must satisfy 0 < low <= high")
        if self.lambda_mode not in ("zero", "ratio"):
            raise SpecError(f"lambda_mode must be 'zero' or 'ratio', got {self.lambda_mode!r}")
        if not 0 < self.t_cold_max_ratio < 1:
            raise SpecError("t_cold_max_ratio must lie in (0, 1)")
        if self.lambda_mode == "ratio" and not 0 <= self.lambda_ratio < 2:
            raise SpecError("lambda_ratio must lie in [0, 2)")


@dataclass(frozen=True)
class SweepRecord:
    index: int
    t_hot: float
    t_cold: float
    gamma_hot: float
    gamma_cold: float
    omega_h: float
    lam: float
    d: int
    eps_carnot: float
    x_h: float
    gamma_ratio: float
    omega_c_opt: float
    x_c_opt: float
    Q_c_opt: float
    cop_opt: float
    cop_ratio: float
    benchmark: float
    excess: float
    valid_x_h: bool
    valid_gamma: bool
    weak_coupling: bool
    error: str = ""

    @property
    def valid(self) -> bool:
        return self.valid_x_h and self.valid_gamma and not self.error


def rng_for_sample(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    if lo == hi:
        return float(lo)
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def sample_configuration(rng: np.random.Generator, spec: SweepSpec) -> MaserConfig:
    """Draw one maser; ``omega_c`` is set to the middle of the refrigeration window."""
    for _ in range(MAX_REJECTIONS):
        t_h = _log_uniform(rng, *spec.t_hot)
        upper = min(spec.t_cold[1], spec.t_cold_max_ratio * t_h)
        if spec.t_cold[0] <= upper:
            t_c = _log_uniform(rng, spec.t_cold[0], upper)
            break
    else:
        raise SpecError(f"no admissible T_c < T_h after {MAX_REJECTIONS} draws")

    gamma_h = _log_uniform(rng, *spec.gamma_hot) * t_h
    gamma_c = _log_uniform(rng, *spec.gamma_cold) * t_c
    omega_h = _log_uniform(rng, *spec.omega_h) * t_h
    mid = reversible_cold_frequency(omega_h, t_h, t_c) / 2
    lam = spec.lambda_ratio * mid if spec.lambda_mode == "ratio" else 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        hot = Bath(t_h, gamma_h, spec.d, "hot")
        cold = Bath(t_c, gamma_c, spec.d, "cold")
    return MaserConfig(omega_h=omega_h, omega_c=mid, lam=lam, hot=hot, cold=cold)


def validity_flags(t_hot, t_cold, gamma_hot, gamma_cold, omega_h, spec: SweepSpec) -> tuple[bool, bool, bool]:
    """``(x_h ok, gamma_c/gamma_h ok, weak coupling ok)`` from raw parameters."""
    x_h = omega_h / t_hot
    weak = gamma_hot / t_hot < 1e-2 and gamma_cold / t_cold < 1e-2
    return x_h <= spec.max_x_h, gamma_cold / gamma_hot <= spec.max_gamma_ratio, weak


def run_sample(spec: SweepSpec, index: int) -> SweepRecord:
    config = sample_configuration(rng_for_sample(spec.seed, index), spec)
    hot, cold = config.hot, config.cold
    eps_c = carnot_cop(hot.temperature, cold.temperature)
    bench = analytic.benchmark_cop(spec.d, eps_c)
    flags = validity_flags(hot.temperature, cold.temperature, hot.gamma, cold.gamma, config.omega_h, spec)
    base = dict(
        index=index,
        t_hot=hot.temperature,
        t_cold=cold.temperature,
        gamma_hot=hot.gamma,
        gamma_cold=cold.gamma,
        omega_h=config.omega_h,
        lam=config.lam,
        d=spec.d,
        eps_carnot=eps_c,
        x_h=config.x_h,
        gamma_ratio=cold.gamma / hot.gamma,
        benchmark=bench,
        valid_x_h=flags[0],
        valid_gamma=flags[1],
        weak_coupling=flags[2],
    )
    nan = math.nan
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            opt = optimizer.optimize_maser(config, tol=spec.tol, grid_size=spec.grid_size)
        if opt.cop_ratio is None:
            raise EndofridgeError("no positive power at the optimum")
    except (EndofridgeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return SweepRecord(
            **base,
            omega_c_opt=nan,
            x_c_opt=nan,
            Q_c_opt=nan,
            cop_opt=nan,
            cop_ratio=nan,
            excess=nan,
            error=type(exc).__name__,
        )
    return SweepRecord(
        **base,
        omega_c_opt=opt.omega_c,
        x_c_opt=opt.x_c,
        Q_c_opt=opt.Q_c,
        cop_opt=opt.cop,
        cop_ratio=opt.cop_ratio,
        excess=opt.cop_ratio - bench,
    )


def _run_chunk(args) -> list[SweepRecord]:
    spec, indices = args
    return [run_sample(spec, i) for i in indices]


def summarize(records: Sequence[SweepRecord], low_eps: float = LOW_EPS_THRESHOLD) -> dict:
    ok = [r for r in records if not r.error]
    filtered = [r for r in ok if r.valid]
    low = [r for r in filtered if r.eps_carnot < low_eps]

    def _max(values):
        values = list(values)
        return max(values) if values else math.nan

    def _mean(values):
        values = list(values)
        return sum(values) / len(values) if values else math.nan

    return {
        "count": len(records),
        "failures": len(records) - len(ok),
        "filtered_count": len(filtered),
        "max_excess": _max(r.excess for r in ok),
        "max_excess_filtered": _max(r.excess for r in filtered),
        "mean_abs_excess_filtered": _mean(abs(r.excess) for r in filtered),
        "low_eps_count": len(low),
        "low_eps_mean_cop_ratio": _mean(r.cop_ratio for r in low),
    }


def run_sweep(spec: SweepSpec, jobs: int = 1) -> tuple[list[SweepRecord], dict]:
    """Optimize every sampled maser; rows come back in sample order."""
    indices = list(range(spec.samples))
    if jobs <= 1 or len(indices) < 2:
        records = [run_sample(spec, i) for i in indices]
    else:
        chunk = max(1, math.ceil(len(indices) / (4 * jobs)))
        chunks = [(spec, indices[i : i + chunk]) for i in range(0, len(indices), chunk)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = [rec for part in pool.map(_run_chunk, chunks) for rec in part]
    return records, summarize(records)


# ---------------------------------------------------------------------------
# CSV


RECORD_FIELDS = [f.name for f in dataclasses.fields(SweepRecord)]


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def write_csv(header: Sequence[str], rows: Iterable[Sequence], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def write_records(records: Sequence[SweepRecord], target: Union[str, TextIO]) -> None:
    rows = [dataclasses.astuple(r) for r in records]
    if isinstance(target, str):
        with open(target, "w", newline="", encoding="utf-8") as fh:
            write_csv(RECORD_FIELDS, rows, fh)
    else:
        write_csv(RECORD_FIELDS, rows, target)


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    write_records(records, buf)
    return buf.getvalue()


def emit_curve(d: float, eps_grid: Sequence[float]) -> list[tuple[float, float]]:
    """Rows ``(eps_C, d / (d + 1 + eps_C))`` of the benchmark curve."""
    grid = [float(e) for e in eps_grid]
    if not grid:
        raise SpecError("benchmark grid must be non-empty")
    return [(e, analytic.benchmark_cop(d, e)) for e in grid]


def curve_grid(eps_min: float, eps_max: float, points: int) -> list[float]:
    if points < 1:
        raise SpecError("need at least one grid point")
    if points == 1:
        return [float(eps_min)]
    if not 0 <= eps_min < eps_max:
        raise SpecError("need 0 <= eps_min < eps_max")
    return [float(v) for v in np.linspace(eps_min, eps_max, points)]


def random_config(
    rng: np.random.Generator,
    lam_fraction: Optional[tuple[float, float]] = (0.0, 0.5),
    refrigerator: bool = True,
    d: int = 3,
) -> MaserConfig:
    """Broad-range random maser used by the self-test and the property checks.

    ``T_h`` log-uniform on [0.5, 50]; ``T_c = u T_h`` with ``u`` in [0.05,
    0.95]; ``gamma / T`` log-uniform on [1e-5, 10**-2.1]; ``x_h`` log-uniform
    on [1e-2, 2]; ``omega_c`` uniform on [0.05, 0.95] of the refrigeration
    window (or of ``omega_h`` when ``refrigerator`` is false); ``lam`` a
    uniform fraction of ``omega_c`` (``None`` means no driving).
    """
    t_h = math.exp(rng.uniform(math.log(0.5), math.log(50.0)))
    t_c = t_h * rng.uniform(0.05, 0.95)
    g_h = t_h * 10 ** rng.uniform(-5, -2.1)
    g_c = t_c * 10 ** rng.uniform(-5, -2.1)
    omega_h = t_h * 10 ** rng.uniform(-2, math.log10(2.0))
    top = omega_h * t_c / t_h if refrigerator else omega_h
    omega_c = top * rng.uniform(0.05, 0.95)
    lam = 0.0 if lam_fraction is None else omega_c * rng.uniform(*lam_fraction)
    return MaserConfig(omega_h, omega_c, lam, Bath(t_h, g_h, d, "hot"), Bath(t_c, g_c, d, "cold"))
