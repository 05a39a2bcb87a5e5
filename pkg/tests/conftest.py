import math

import numpy as np
import pytest

from infosym.models import polygon_model


def r_sq(n: int) -> float:
    return 1.0 / math.cos(math.pi / n)


@pytest.fixture(scope="session")
def pentagon():
    return polygon_model(5)


@pytest.fixture(scope="session")
def hexagon():
    return polygon_model(6)


@pytest.fixture(scope="session")
def squit():
    return polygon_model(4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
