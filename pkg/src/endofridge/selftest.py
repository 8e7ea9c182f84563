"""Cross-route consistency checks runnable from the command line."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

from . import _accel, _kernels, analytic, maser, optimizer
from .core import Bath, relaxation_rate
from .harness import random_config


@dataclass
class Check:
    name: str
    worst: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.worst) and self.worst <= self.tolerance


@dataclass
class SelfTestReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            out.append(f"{status} {c.name}: worst={c.worst:.3e} tol={c.tolerance:.1e}")
        return out


def _kms_check(rate: Callable[[Bath, float], float], rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for _ in range(n):
        bath = Bath(
            temperature=10 ** rng.uniform(-1, 1.5),
            gamma=10 ** rng.uniform(-6, -3),
            dimension=int(rng.integers(1, 4)),
            label="hot",
        )
        w = bath.temperature * 10 ** rng.uniform(-3, 1)
        up, down = rate(bath, -w), rate(bath, w)
        if not (up > 0 and down > 0):
            return math.inf
        worst = max(worst, abs(up - math.exp(-w / bath.temperature) * down) / down)
    return worst


def _route_checks(rng: np.random.Generator, n: int) -> tuple[float, float]:
    pop_err = cur_err = 0.0
    for _ in range(n):
        cfg = random_config(rng)
        lc, rep = maser.evaluate(cfg)
        rho = maser.liouvillian_steady_state_oracle(cfg, extended=True)
        pops = np.array([float(rho[k, k].real) for k in range(3)])
        nc = float(np.real(rho[1, 2] + rho[2, 1]))
        pop_err = max(pop_err, float(np.abs(pops - lc.populations).max()), abs(nc - lc.nc))
        q_h = maser.heat_current_general(cfg, rho, "hot")
        q_c = maser.heat_current_general(cfg, rho, "cold")
        scale = max(abs(rep.Q_h), abs(rep.Q_c))
        cur_err = max(cur_err, abs(q_h - rep.Q_h) / scale, abs(q_c - rep.Q_c) / scale)
    return pop_err, cur_err


def _weak_driving_check(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for _ in range(n):
        cfg = random_config(rng, lam_fraction=None)
        _, rep = maser.evaluate(cfg)
        ref = analytic.weak_driving_flux(cfg.hot, cfg.cold, cfg.omega_h, cfg.omega_c)
        worst = max(worst, abs(rep.flux / ref - 1))
    return worst


def _benchmark_check() -> float:
    worst = 0.0
    for d in (1, 2, 3):
        for eps_c in (0.1, 1.0, 5.0):
            t_c = 1.0
            t_h = t_c * (1 + 1 / eps_c)
            hot = Bath(t_h, 1e-3 * t_h, d, "hot")
            cold = Bath(t_c, 1e-6, d, "cold")
            rep = optimizer.optimize_analytic(hot, cold, 0.1 * t_h, "asymmetric")
            worst = max(worst, abs(rep.cop_ratio - analytic.benchmark_cop(d, eps_c)))
    return worst


def _laws_check(rng: np.random.Generator, n: int) -> tuple[float, float]:
    first = 0.0
    second = 0.0
    for _ in range(n):
        cfg = random_config(rng, refrigerator=bool(rng.integers(0, 2)))
        _, rep = maser.evaluate(cfg)
        scale = max(abs(rep.Q_h), abs(rep.Q_c))
        first = max(first, abs(rep.first_law_residual) / scale)
        second = max(second, -rep.sigma)
    return first, second


def _backend_check(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for _ in range(n):
        cfg = random_config(rng)
        grid = np.linspace(max(cfg.lam * 1.01, 1e-3 * cfg.omega_c_rev), cfg.omega_c_rev, 17)
        a = _kernels.maser_currents_numpy(grid, cfg)
        b = _kernels.maser_currents_numba(grid, cfg) if _accel.NUMBA_AVAILABLE else a
        # Both kernels run in double, so the net currents are only resolved
        # to rounding times the gross channel exchange.
        gross = np.array([maser.evaluate(cfg.with_cold_frequency(w))[1].gross for w in grid])
        worst = max(
            worst,
            float(np.abs(a[:, :4] - b[:, :4]).max()),
            float((np.abs(a[:, 4:] - b[:, 4:]).max(axis=1) / gross).max()),
        )
    return worst


def self_test(
    seed: int = 2024,
    samples: int = 200,
    rate: Callable[[Bath, float], float] = relaxation_rate,
    stream: TextIO | None = None,
) -> SelfTestReport:
    """Run every check, print one line each to ``stream`` and return the report.

    ``rate`` replaces the relaxation-rate function in the KMS check (used to
    confirm that a corrupted rate is detected).
    """
    rng = np.random.default_rng(seed)
    report = SelfTestReport()
    report.checks.append(Check("KMS detailed balance", _kms_check(rate, rng, samples), 1e-12))
    pop_err, cur_err = _route_checks(rng, samples)
    report.checks.append(Check("reduced population matrix vs Liouvillian null space", pop_err, 1e-9))
    report.checks.append(Check("explicit vs weighted-trace heat currents", cur_err, 1e-10))
    report.checks.append(Check("weak-driving flux vs lambda=0 solver", _weak_driving_check(rng, samples), 1e-12))
    report.checks.append(Check("asymmetric-flux optimum vs d/(d+1+eps_C)", _benchmark_check(), 1e-6))
    first, second = _laws_check(rng, 5 * samples)
    report.checks.append(Check("first law (relative residual)", first, 1e-10))
    report.checks.append(Check("second law (-sigma)", second, 1e-12))
    report.checks.append(Check(f"kernel backends agree ({_accel.backend_name()} active)", _backend_check(rng, 20), 1e-12))
    if stream is None:
        stream = sys.stdout
    for line in report.lines():
        print(line, file=stream)
    return report
