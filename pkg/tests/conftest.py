import numpy as np
import pytest
from hypothesis import strategies as st

from lagrangia.spectral import SpectralField


def random_field(rng, n_modes=8, degree=3, rank=1, dimension=3, hermitian=True, mean_free=True):
    """Random field with up to ``n_modes`` conjugate pairs inside ``|p|_inf <= degree``."""
    modes = {}
    d3 = degree if dimension == 3 else 0
    shape = (3,) * rank
    while len(modes) < n_modes:
        p = (int(rng.integers(-degree, degree + 1)), int(rng.integers(-degree, degree + 1)), int(rng.integers(-d3, d3 + 1)))
        if p == (0, 0, 0) and mean_free:
            continue
        if hermitian and (tuple(-v for v in p) in modes or p == (0, 0, 0)):
            continue
        modes[p] = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return SpectralField.from_modes(modes, dimension=dimension, rank=rank, hermitian=hermitian)


@st.composite
def fields(draw, rank=0, dimension=3, max_modes=50, degree=4, mean_free=False):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1, max_modes // 2))
    return random_field(np.random.default_rng(seed), n, degree, rank, dimension, True, mean_free)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
