import numpy as np
import pytest

from unpredictable.linalg import spectral_split
from unpredictable.signals import logistic_iterate, theta_build

EXAMPLE1_MATRIX = np.array([[-2.0, 2.0], [1.0, -3.0]])
EXAMPLE2_MATRIX = np.array([[-52098.0, 0.0], [9.5, 3.25e-8]])


@pytest.fixture(scope="session")
def example1_split():
    return spectral_split(EXAMPLE1_MATRIX)


@pytest.fixture(scope="session")
def example2_split():
    return spectral_split(EXAMPLE2_MATRIX)


@pytest.fixture(scope="session")
def small_orbit():
    return logistic_iterate(0.5, 3.91, 400)


@pytest.fixture(scope="session")
def small_theta(small_orbit):
    return theta_build(small_orbit, decay=2.0)
