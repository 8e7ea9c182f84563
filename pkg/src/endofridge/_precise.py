"""Multiprecision scalars for the cancellation-prone paths.

The stationary populations come from double-precision rates, but the net heat
currents are small differences of per-channel exchanges (by up to ~1e10 when
one bath dominates), so the populations, the currents and the density-matrix
oracle are carried in ``mpmath`` at ``WORKING_DPS`` digits. A private context
is used so the global ``mpmath.mp`` settings are left alone.
"""

from __future__ import annotations

import mpmath
import numpy as np

WORKING_DPS = 40
#: Iterative refinement stops once the correction is below this fraction of
#: the solution's largest entry.
REFINE_TOL = 1e-32
MAX_REFINE = 12

CTX = mpmath.MPContext()
CTX.dps = WORKING_DPS


def _plain(x):
    return x.item() if isinstance(x, np.generic) else x


def mpf(x):
    return CTX.mpf(_plain(x))


def mpc(x):
    return CTX.mpc(_plain(x))


def real_array(a) -> np.ndarray:
    a = np.asarray(a)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = mpf(v)
    return out


def complex_array(a) -> np.ndarray:
    a = np.asarray(a)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = mpc(v)
    return out


def to_float(a) -> np.ndarray:
    return np.array([float(v) for v in np.ravel(a)]).reshape(np.shape(a))


def to_complex(a) -> np.ndarray:
    return np.array([complex(v) for v in np.ravel(a)]).reshape(np.shape(a))


def refine(system: np.ndarray, rhs: np.ndarray, x0: np.ndarray, complex_valued: bool = False) -> np.ndarray:
    """Iterative refinement of ``system @ x = rhs``.

    ``system`` and ``rhs`` are object arrays at working precision; each
    correction is solved in double from the rounded matrix.
    """
    lower = to_complex if complex_valued else to_float
    lift = complex_array if complex_valued else real_array
    lu_matrix = lower(system)
    x = lift(x0)
    for _ in range(MAX_REFINE):
        step = np.linalg.solve(lu_matrix, lower(rhs - system @ x))
        x = x + lift(step)
        size = max(abs(v) for v in x)
        if np.abs(step).max() <= REFINE_TOL * float(size):
            break
    return x
