"""Optional numba acceleration.

Set ``ENDOFRIDGE_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable. The flag is read once, at import time.
"""

from __future__ import annotations

import os

_FLAG = os.environ.get("ENDOFRIDGE_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG in {"1", "true", "yes", "on"}

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - depends on the environment
    numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not DISABLED_BY_ENV


def njit(func):
    """Compile ``func`` with numba when available, else return it untouched."""
    if NUMBA_AVAILABLE:
        return numba.njit(cache=True, fastmath=False)(func)
    return func


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
