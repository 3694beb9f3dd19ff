import numpy as np
import pytest

from platekit.curve import ClosedCurve
from platekit.tensor4 import isotropic_plate


@pytest.fixture
def rng():
    return np.random.default_rng(20260415)


@pytest.fixture(scope="session")
def circle():
    return ClosedCurve.circle(1.0, 256)


@pytest.fixture(scope="session")
def iso():
    return isotropic_plate(1.0, 0.3)
