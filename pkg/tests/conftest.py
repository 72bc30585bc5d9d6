import pytest

from stripdamp.model import CutoffFunction, DampingProfile


@pytest.fixture(scope="session")
def profile1():
    """Default geometry at beta = 1."""
    return DampingProfile(beta=1.0, a=1.0, sigma=1.0, b=3.0)


@pytest.fixture(scope="session")
def cutoff():
    return CutoffFunction(b=3.0, delta=0.4)
