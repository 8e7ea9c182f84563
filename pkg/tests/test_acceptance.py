"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the worst observed
deviation, its tolerance and the wall time; the line is shown even when
pytest captures output. Run ``python3 tests/test_acceptance.py`` for the
lines alone.
"""

from __future__ import annotations

import math
import sys
import time
import warnings
from dataclasses import dataclass

import numpy as np
import pytest

from endofridge import analytic, harness, maser, optimizer
from endofridge.core import Bath


@dataclass
class Outcome:
    worst: float
    tolerance: float
    detail: str = ""
    ok: bool | None = None

    @property
    def passed(self) -> bool:
        within = math.isfinite(self.worst) and self.worst <= self.tolerance
        return within if self.ok is None else (self.ok and within)


def _bath(t, g, d, label):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Bath(t, g, d, label)


def benchmark_reproduction() -> Outcome:
    worst = 0.0
    for d in (1, 2, 3):
        for eps_c in (0.1, 0.5, 1.0, 2.0, 5.0):
            t_h = 1.0 + 1.0 / eps_c
            hot, cold = _bath(t_h, 1e-3 * t_h, d, "hot"), _bath(1.0, 1e-6, d, "cold")
            rep = optimizer.optimize_analytic(hot, cold, 0.1 * t_h, "asymmetric")
            worst = max(worst, abs(rep.cop_ratio - analytic.benchmark_cop(d, eps_c)))
    return Outcome(worst, 1e-6, "max |eps*/eps_C - d/(d+1+eps_C)| over 15 cases")


def weak_driving_identity() -> Outcome:
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(1000):
        cfg = harness.random_config(rng, lam_fraction=None)
        _, rep = maser.evaluate(cfg)
        ref = analytic.weak_driving_flux(cfg.hot, cfg.cold, cfg.omega_h, cfg.omega_c)
        worst = max(worst, abs(rep.flux / ref - 1))
    return Outcome(worst, 1e-12, "max relative flux deviation, 1000 configs")


def high_temperature_regime() -> Outcome:
    worst = 0.0
    for eps_c in (0.1, 1.0, 5.0):
        t_c = 1.0
        t_h = t_c * (1 + 1 / eps_c)
        g_h = 1e-3 * t_h
        hot, cold = _bath(t_h, g_h, 3, "hot"), _bath(t_c, 1e-3 * g_h, 3, "cold")
        omega_h = 0.01 * t_h
        rev = omega_h * t_c / t_h
        template = maser.MaserConfig(omega_h, rev / 2, 1e-3 * rev / 2, hot, cold)
        rep = optimizer.optimize_maser(template, fast=False)
        worst = max(worst, abs(rep.cop_ratio / (3 / (4 + eps_c)) - 1))
    return Outcome(worst, 0.02, "max relative deviation from 3/(4+eps_C)")


def sweep_reproduction() -> Outcome:
    _, s = harness.run_sweep(harness.SweepSpec(samples=2000, seed=4, d=3))
    mean = s["low_eps_mean_cop_ratio"]
    in_band = s["low_eps_count"] > 0 and 0.70 <= mean <= 0.75
    return Outcome(
        s["max_excess_filtered"],
        0.05,
        f"filtered={s['filtered_count']} failures={s['failures']} "
        f"low-eps bin n={s['low_eps_count']} mean={mean:.4f} (need [0.70, 0.75])",
        ok=in_band and s["filtered_count"] > 0,
    )


def thermodynamic_laws() -> Outcome:
    rng = np.random.default_rng(5)
    first = second = 0.0
    for i in range(10_000):
        cfg = harness.random_config(rng, refrigerator=bool(i % 2))
        _, rep = maser.evaluate(cfg)
        first = max(first, abs(rep.first_law_residual) / max(abs(rep.Q_h), abs(rep.Q_c)))
        second = max(second, -rep.sigma)
    return Outcome(first, 1e-10, f"first-law residual; min sigma = {0.0 - second:.3e} (need >= -1e-12)", ok=second <= 1e-12)


def oracle_equivalence() -> Outcome:
    rng = np.random.default_rng(6)
    pop = cur = 0.0
    for _ in range(1000):
        cfg = harness.random_config(rng)
        lc, rep = maser.evaluate(cfg)
        rho = maser.liouvillian_steady_state_oracle(cfg, extended=True)
        diag = np.array([float(rho[k, k].real) for k in range(3)])
        nc = float((rho[1, 2] + rho[2, 1]).real)
        pop = max(pop, float(np.abs(diag - lc.populations).max()), abs(nc - lc.nc))
        scale = max(abs(rep.Q_h), abs(rep.Q_c))
        for bath, q in (("hot", rep.Q_h), ("cold", rep.Q_c)):
            cur = max(cur, abs(maser.heat_current_general(cfg, rho, bath) - q) / scale)
    return Outcome(pop, 1e-9, f"populations/n_c; currents rel = {cur:.3e} (need <= 1e-10)", ok=cur <= 1e-10)


def closed_form_spot_checks() -> Outcome:
    cases = [
        (analytic.ynca_efficiency(0.5), 1 - math.sqrt(0.5)),
        (analytic.chi_optimal_cop(3.0), 1.0),
        (analytic.onsager_optimal_cop(analytic.OnsagerParams(q=1.0), 1.0), 1 / 3),
        (analytic.onsager_optimal_cop(analytic.OnsagerParams(q=1.0), 1e14), 1.0),
        (analytic.benchmark_cop(3, 1.0), 0.6),
    ]
    limit = [analytic.onsager_optimal_cop(analytic.OnsagerParams(q=1.0), 10.0**k) for k in range(0, 15, 2)]
    monotone = all(b > a for a, b in zip(limit, limit[1:]))
    worst = max(abs(got - want) for got, want in cases)
    return Outcome(worst, 1e-12, "five closed-form values; q=1 limit approached monotonically", ok=monotone)


def estimate_c_recovery() -> Outcome:
    hot, cold = _bath(2.0, 2e-3, 3, "hot"), _bath(1.0, 1e-6, 3, "cold")
    flux = lambda x_h, x_c: analytic.weak_driving_flux(hot, cold, x_h * hot.temperature, x_c * cold.temperature)
    est = analytic.estimate_C(flux)
    return Outcome(abs(est.value - 0.75), 1e-3, f"C = {est.value:.10f}, Richardson order {est.order}", ok=est.converged)


CRITERIA = [
    (1, "benchmark reproduction", benchmark_reproduction, 1.0),
    (2, "weak-driving identity", weak_driving_identity, 5.0),
    (3, "high-temperature regime", high_temperature_regime, 10.0),
    (4, "desk-scale sweep", sweep_reproduction, 60.0),
    (5, "thermodynamic laws", thermodynamic_laws, 30.0),
    (6, "cross-route oracle equivalence", oracle_equivalence, None),
    (7, "closed-form spot checks", closed_form_spot_checks, None),
    (8, "estimate_C recovery", estimate_c_recovery, None),
]


def evaluate(number, name, check, budget):
    start = time.perf_counter()
    outcome = check()
    elapsed = time.perf_counter() - start
    on_time = budget is None or elapsed <= budget
    passed = outcome.passed and on_time
    limit = f"limit {budget:g} s" if budget is not None else "no limit"
    line = (
        f"{'PASS' if passed else 'FAIL'} criterion {number} ({name}): worst={outcome.worst:.3e} "
        f"tol={outcome.tolerance:.0e}; {outcome.detail}; {elapsed:.2f} s ({limit})"
    )
    return passed, line


@pytest.mark.parametrize("number,name,check,budget", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, name, check, budget, capsys):
    passed, line = evaluate(number, name, check, budget)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(p for p, _ in results) else 1)
