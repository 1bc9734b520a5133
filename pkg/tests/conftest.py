import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("hblab", max_examples=40, deadline=None)
settings.load_profile("hblab")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def crandn(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)
