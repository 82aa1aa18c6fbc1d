import numpy as np
import pytest

from riesz_clifford.verify import random_commuting_tuple, random_hermitian  # noqa: F401


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def hermitian(rng, d=3):
    return random_hermitian(d, rng)
