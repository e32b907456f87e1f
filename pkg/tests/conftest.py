import numpy as np
import pytest
from hypothesis import settings

from siolab import make_ellipse, make_unit_circle

settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def circle512():
    return make_unit_circle(512)


@pytest.fixture(scope="session")
def circle1024():
    return make_unit_circle(1024)


@pytest.fixture(scope="session")
def circle4096():
    return make_unit_circle(4096)


@pytest.fixture(scope="session")
def circle8192():
    return make_unit_circle(8192)


@pytest.fixture(scope="session")
def ellipse4096():
    return make_ellipse(2.0, 1.0, 4096)


@pytest.fixture(scope="session")
def ellipse8192():
    return make_ellipse(2.0, 1.0, 8192)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
