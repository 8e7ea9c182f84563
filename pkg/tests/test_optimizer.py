import dataclasses
import warnings

import numpy as np
import pytest
from conftest import make_bath

from endofridge import _kernels, analytic, maser, optimizer
from endofridge.core import Bath
from endofridge.errors import DomainError, EdgeOptimumWarning, EmptyWindowError, NoRefrigerationError

TOL = optimizer.DEFAULT_TOL


def benchmark_baths(d, eps_c, g_h=1e-3, g_c=1e-6):
    t_c = 1.0
    t_h = t_c * (1 + 1 / eps_c)
    return make_bath(t_h, g_h * t_h, d, "hot"), make_bath(t_c, g_c, d, "cold")


class TestMaximize:
    def test_closed_form_maximizer(self):
        for d in (1, 2, 3):
            hot, cold = benchmark_baths(d, 1.0)
            rep = optimizer.optimize_analytic(hot, cold, 0.1 * hot.temperature, "asymmetric")
            assert abs(rep.x_c - d / (d + 1) * 0.1) <= TOL * 0.1

    @pytest.mark.parametrize("eps_c", [0.1, 0.5, 1.0, 2.0, 5.0])
    def test_linear_bath_benchmark(self, eps_c):
        hot, cold = benchmark_baths(1, eps_c)
        rep = optimizer.optimize_analytic(hot, cold, 0.1 * hot.temperature, "asymmetric")
        assert abs(rep.cop_ratio - 1 / (2 + eps_c)) <= 1e-6

    def test_planar_bath_example(self):
        hot, cold = benchmark_baths(2, 2.0)
        rep = optimizer.optimize_analytic(hot, cold, 0.1 * hot.temperature, "asymmetric")
        assert abs(rep.cop_ratio - 0.4) <= 1e-6

    @pytest.mark.parametrize("eps_c", [0.1, 1.0, 5.0])
    def test_weak_driving_model(self, eps_c):
        hot, cold = benchmark_baths(3, eps_c, g_h=1e-3, g_c=1e-6)
        rep = optimizer.optimize_analytic(hot, cold, 0.01 * hot.temperature, "weak_driving")
        assert rep.cop_ratio == pytest.approx(3 / (4 + eps_c), rel=0.02)

    def test_report_invariants(self):
        for model in optimizer.MODELS:
            hot, cold = benchmark_baths(3, 1.0, g_c=1e-5)
            rep = optimizer.optimize_analytic(hot, cold, 0.1 * hot.temperature, model)
            lo, hi = rep.window
            assert lo < rep.omega_c < hi
            assert rep.Q_c > 0
            assert 0 < rep.cop < rep.eps_carnot
            assert rep.converged
            assert rep.stationarity <= 10 * TOL

    def test_fixed_force_scale_invariance(self):
        # at fixed forces both fluxes scale as T^d, so their optima coincide
        # for every temperature scale
        reports = []
        for s in (1.0, 2.0, 4.0):
            hot, cold = make_bath(2.0 * s, 1e-3, 3, "hot"), make_bath(1.0 * s, 1e-5, 3, "cold")
            reports.append(
                [optimizer.optimize_analytic(hot, cold, 0.2 * s, m).x_c for m in ("weak_driving", "high_temperature")]
            )
        for r in reports[1:]:
            assert r == pytest.approx(reports[0], rel=1e-12)

    def test_models_converge_as_forces_shrink(self):
        hot, cold = make_bath(2.0, 1e-3, 3, "hot"), make_bath(1.0, 1e-5, 3, "cold")
        gaps = []
        for k in range(5):
            w = 0.4 / 2**k
            a = optimizer.optimize_analytic(hot, cold, w, "weak_driving").cop_ratio
            b = optimizer.optimize_analytic(hot, cold, w, "high_temperature").cop_ratio
            gaps.append(abs(a - b))
        assert all(y < 0.5 * x for x, y in zip(gaps, gaps[1:]))

    def test_unknown_model(self):
        hot, cold = benchmark_baths(3, 1.0)
        with pytest.raises(DomainError):
            optimizer.optimize_analytic(hot, cold, 0.2, "eq99")

    def test_window_errors(self):
        f = lambda w: w * (1 - w)
        with pytest.raises(EmptyWindowError):
            optimizer.maximize_cooling_rate(f, (0.5, 0.5))
        with pytest.raises(DomainError):
            optimizer.maximize_cooling_rate(f, (0.0, 1.0), tol=1e-2)
        with pytest.raises(DomainError):
            optimizer.maximize_cooling_rate(f, (0.0, 1.0), tol=1e-15)
        with pytest.raises(DomainError):
            optimizer.maximize_cooling_rate(f, (0.0, 1.0), grid_size=3)

    def test_no_refrigeration(self):
        with pytest.raises(NoRefrigerationError):
            optimizer.maximize_cooling_rate(lambda w: -w, (0.0, 1.0))

    def test_edge_warning(self):
        with pytest.warns(EdgeOptimumWarning):
            rep = optimizer.maximize_cooling_rate(lambda w: w, (0.0, 1.0))
        assert rep.omega_c > 0.9

    def test_ties_prefer_larger_frequency(self):
        grid_rep = optimizer.maximize_cooling_rate(lambda w: 1.0 if 0.2 < w < 0.8 else 0.5, (0.0, 1.0))
        assert grid_rep.omega_c > 0.5

    def test_multimodal_global(self):
        # a narrow interior peak beats the broad local one
        f = lambda w: np.exp(-((w - 0.2) ** 2) / 0.01) + 2 * np.exp(-((w - 0.7) ** 2) / 0.001)
        rep = optimizer.maximize_cooling_rate(f, (0.0, 1.0))
        assert rep.omega_c == pytest.approx(0.7, rel=1e-8)


def maser_template(lam_scale=1e-3, d=3, t_h=2.0, t_c=1.0, g_h=1e-3, g_c=1e-6, x_h=0.05):
    hot, cold = make_bath(t_h, g_h, d, "hot"), make_bath(t_c, g_c, d, "cold")
    w_h = x_h * t_h
    rev = w_h * t_c / t_h
    return maser.MaserConfig(w_h, rev / 2, lam_scale * rev / 2, hot, cold)


class TestOptimizeMaser:
    @pytest.mark.parametrize("fast", [True, False])
    def test_brute_force_oracle(self, fast):
        tpl = maser_template(1e-3)
        rep = optimizer.optimize_maser(tpl, fast=fast)
        lo, hi = optimizer.maser_window(tpl)
        grid = np.linspace(lo, hi, 10_002)[1:-1]
        q = _kernels.maser_currents_numpy(grid, tpl)[:, _kernels.COL_QC]
        i = int(np.argmax(q))
        spacing = grid[1] - grid[0]
        assert abs(rep.omega_c - grid[i]) <= spacing
        assert rep.Q_c >= q[i] * (1 - 1e-12)

    def test_matches_analytic_route(self):
        tpl = maser_template(0.0, t_h=20.0, t_c=10.0, g_h=1e-2, g_c=1e-5, x_h=0.01)
        num = optimizer.optimize_maser(tpl)
        ana = optimizer.optimize_analytic(tpl.hot, tpl.cold, tpl.omega_h, "asymmetric")
        assert num.cop_ratio == pytest.approx(ana.cop_ratio, rel=0.01)
        assert num.omega_c == pytest.approx(ana.omega_c, rel=0.01)

    def test_undriven_matches_weak_driving_model(self):
        tpl = maser_template(0.0)
        num = optimizer.optimize_maser(tpl, fast=False)
        ana = optimizer.optimize_analytic(tpl.hot, tpl.cold, tpl.omega_h, "weak_driving")
        assert num.omega_c == pytest.approx(ana.omega_c, rel=1e-7)

    def test_reversible_edge(self):
        tpl = maser_template(0.0)
        rep = optimizer.optimize_maser(tpl)
        _, edge = maser.evaluate(tpl.with_cold_frequency(tpl.omega_c_rev * (1 - 1e-12)))
        assert abs(edge.Q_c) <= 1e-10 * rep.Q_c

    def test_driven_edge(self):
        # driving shifts the zero-flux point below omega_c,rev by O(lambda^2)
        for scale in (1e-3, 1e-2):
            tpl = maser_template(scale)
            rep = optimizer.optimize_maser(tpl)
            _, edge = maser.evaluate(tpl.with_cold_frequency(tpl.omega_c_rev * (1 - 1e-12)))
            assert edge.Q_c < 0
            assert abs(edge.Q_c) <= 10 * scale**2 * rep.Q_c

    def test_report(self):
        tpl = maser_template(1e-2)
        rep = optimizer.optimize_maser(tpl)
        lo, hi = rep.window
        assert lo == tpl.lam * optimizer.LAMBDA_MARGIN and hi == tpl.omega_c_rev
        assert lo < rep.omega_c < hi
        assert rep.Q_c > 0 and rep.power > 0
        assert 0 < rep.cop < tpl.eps_carnot
        assert rep.cop_ratio == rep.cop / tpl.eps_carnot
        assert rep.x_c == rep.omega_c / tpl.cold.temperature

    def test_backends_agree(self):
        tpl = maser_template(1e-2)
        a = optimizer.optimize_maser(tpl, fast=True)
        b = optimizer.optimize_maser(tpl, fast=False)
        assert a.omega_c == pytest.approx(b.omega_c, rel=1e-6)
        assert a.cop_ratio == pytest.approx(b.cop_ratio, rel=1e-6)

    def test_stationarity(self):
        rep = optimizer.optimize_maser(maser_template(1e-3), fast=False)
        assert rep.stationarity <= 10 * TOL

    def test_determinism(self):
        tpl = maser_template(1e-2)
        a, b = optimizer.optimize_maser(tpl), optimizer.optimize_maser(tpl)
        assert dataclasses.astuple(a) == dataclasses.astuple(b)

    def test_empty_window(self):
        hot, cold = make_bath(2.0, 1e-3, 3, "hot"), make_bath(1.0, 1e-6, 3, "cold")
        tpl = maser.MaserConfig(1.0, 0.8, 0.6, hot, cold)
        with pytest.raises(EmptyWindowError):
            optimizer.optimize_maser(tpl)

    def test_template_frequency_ignored(self):
        tpl = maser_template(1e-2)
        a = optimizer.optimize_maser(tpl)
        b = optimizer.optimize_maser(tpl.with_cold_frequency(tpl.omega_c_rev * 0.9))
        assert dataclasses.astuple(a) == dataclasses.astuple(b)
