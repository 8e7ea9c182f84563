"""Time the numba and numpy limit-cycle kernels on the same grids.

Usage: python3 benchmarks/bench_kernels.py [--sizes 64 1024 16384] [--repeat 5]

Both backends are called directly, so the ENDOFRIDGE_DISABLE_NUMBA flag does
not matter here. The first numba call compiles (or loads from the cache) and
is reported separately.
"""

import argparse
import time

import numpy as np

from endofridge import _accel, _kernels
from endofridge.core import Bath
from endofridge.maser import MaserConfig


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 1024, 16384])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    cfg = MaserConfig(
        omega_h=0.1,
        omega_c=0.02,
        lam=1e-4,
        hot=Bath(1.0, 1e-3, 3, "hot"),
        cold=Bath(0.5, 1e-5, 3, "cold"),
    )
    lo, hi = cfg.lam * 1.01, cfg.omega_c_rev

    if not _accel.NUMBA_AVAILABLE:
        print("numba not installed; timing the numpy kernel only")
    else:
        t0 = time.perf_counter()
        _kernels.maser_currents_numba(np.array([0.5 * (lo + hi)]), cfg)
        print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.3f} s")

    print(f"{'size':>8} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8} {'max rel diff':>13}")
    for n in args.sizes:
        grid = np.linspace(lo, hi, n)
        t_np = best_of(lambda: _kernels.maser_currents_numpy(grid, cfg), args.repeat)
        if _accel.NUMBA_AVAILABLE:
            t_nb = best_of(lambda: _kernels.maser_currents_numba(grid, cfg), args.repeat)
            a = _kernels.maser_currents_numpy(grid, cfg)
            b = _kernels.maser_currents_numba(grid, cfg)
            diff = np.abs(a - b).max() / np.abs(a).max()
            print(f"{n:>8} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} {t_np / t_nb:>8.1f} {diff:>13.2e}")
        else:
            print(f"{n:>8} {t_np * 1e3:>12.3f} {'-':>12} {'-':>8} {'-':>13}")


if __name__ == "__main__":
    main()
