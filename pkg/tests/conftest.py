import numpy as np
import pytest

from sepcert.config import get_tolerances


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture
def tols():
    return get_tolerances("default")
