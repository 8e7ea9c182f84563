import warnings

import numpy as np
import pytest

from endofridge.core import Bath
from endofridge.maser import MaserConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def generic_config():
    return MaserConfig(
        omega_h=1.0,
        omega_c=0.3,
        lam=0.05,
        hot=Bath(2.0, 1e-3, 3, "hot"),
        cold=Bath(1.0, 5e-4, 3, "cold"),
    )


def make_bath(t, g, d=3, label="hot"):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Bath(t, g, d, label)
