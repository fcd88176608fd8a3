import math

import pytest

from duality_sim.interferometer import GridSpec, SlitGeometry

ALPHA = math.sqrt(8.0)

# reduced numerics for module tests that do not check spec tolerances
SMALL_NUMERIC = {
    "n_max": 48,
    "grid": {"x_min": -12.0, "x_max": 14.0, "n_points": 2048},
}


@pytest.fixture(scope="session")
def default_grid():
    return GridSpec()


@pytest.fixture(scope="session")
def geometry():
    return SlitGeometry()
