import numpy as np
import pytest
from scipy.stats import unitary_group

from quantum.cvkit.config import CVKitConfig, Tolerances, set_config
from quantum.cvkit.types import FockVector


@pytest.fixture(autouse=True)
def defconfig():
    c = CVKitConfig(threads=1, log_level='WARNING', tolerances=Tolerances())
    set_config(c)
    yield c
    set_config(None)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def haar(rng):
    def _draw(m: int) -> np.ndarray:
        return unitary_group.rvs(m, random_state=rng)
    return _draw


@pytest.fixture
def single_photon():
    return FockVector(1, 1, {(1,): 1.0})


@pytest.fixture
def vacuum_state():
    return FockVector(1, 1, {(0,): 1.0})


@pytest.fixture
def balanced_splitter():
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
