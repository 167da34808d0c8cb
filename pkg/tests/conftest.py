import numpy as np
import pytest

from njconst import SpaceSpec
from njconst._backend import kernels


def gaussian_tuples(space: SpaceSpec, n: int, count: int, seed: int) -> np.ndarray:
    """(count, n, d) stack of nonzero Gaussian tuples."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, 997)))
    t = rng.standard_normal((count, n, space.dim))
    bad = ~np.any(t, axis=2)
    while bad.any():  # pragma: no cover
        t[bad] = rng.standard_normal((int(bad.sum()), space.dim))
        bad = ~np.any(t, axis=2)
    return t


def unit_tuples(space: SpaceSpec, n: int, count: int, seed: int) -> np.ndarray:
    """(count, n, d) stack of tuples with every vector on S(X)."""
    t = gaussian_tuples(space, n, count, seed)
    norms = np.asarray(kernels.batch_norms(t, space.p_float))
    return t / norms[:, :, None]


def sphere_tuples(space: SpaceSpec, n: int, count: int, seed: int) -> np.ndarray:
    """(count, n, d) stack of tuples on S(l_n^2(X))."""
    t = gaussian_tuples(space, n, count, seed)
    norms = np.asarray(kernels.batch_norms(t, space.p_float))
    scale = np.sqrt((norms**2).sum(axis=1))
    return t / scale[:, None, None]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
