"""The recursive sign matrix, its tuple operator, and the sup-norm extremal tuple.

The matrix of order n has 2**(n-1) rows enumerating every sign pattern with
leading +1; it is built by the column-extension recursion starting from
[[1, 1], [1, -1]]. Its rows double as the sign-pattern enumeration used by
the sign-average functional, and its columns are an isometric embedding of
the extreme l^1-like tuple into the sup-norm space of dimension 2**(n-1).
"""

import functools
from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError, DimensionMismatchError
from .spaces import INF, SpaceSpec, as_tuple_array

DEFAULT_N_CAP = 20


def _check_n(n: int, n_cap: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 2 <= n <= n_cap:
        raise CapExceededError(f"n must satisfy 2 <= n <= {n_cap}, got {n!r}")


@dataclass(frozen=True)
class SignMatrix:
    """Immutable 2**(n-1) x n matrix of +-1 entries (int8, read-only)."""

    n: int
    entries: np.ndarray

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    def gram(self) -> np.ndarray:
        """A^T A in exact 64-bit integer arithmetic."""
        a = self.entries.astype(np.int64)
        return a.T @ a


@functools.lru_cache(maxsize=None)
def _build_entries(n: int) -> np.ndarray:
    if n == 2:
        m = np.array([[1, 1], [1, -1]], dtype=np.int8)
    else:
        prev = _build_entries(n - 1)
        half = prev.shape[0]
        m = np.empty((2 * half, n), dtype=np.int8)
        m[:half, :-1] = prev
        m[half:, :-1] = prev
        m[:half, -1] = 1
        m[half:, -1] = -1
    m.setflags(write=False)
    return m


@functools.lru_cache(maxsize=None)
def _entries_float(n: int) -> np.ndarray:
    m = np.ascontiguousarray(_build_entries(n), dtype=np.float64)
    m.setflags(write=False)
    return m


def sign_matrix(n: int, n_cap: int = DEFAULT_N_CAP) -> SignMatrix:
    """The order-n sign matrix from the column-extension recursion."""
    _check_n(n, n_cap)
    return SignMatrix(n=int(n), entries=_build_entries(int(n)))


def apply_tn(space: SpaceSpec, m: SignMatrix, t) -> np.ndarray:
    """Apply the row operator: entry i of the result is sum_j m[i,j] x_j."""
    arr = as_tuple_array(space, t)
    if arr.shape[0] != m.n:
        raise DimensionMismatchError(
            f"sign matrix of order {m.n} applied to a tuple of {arr.shape[0]} vectors"
        )
    return _entries_float(m.n) @ arr


def extremal_linf_tuple(n: int, n_cap: int = DEFAULT_N_CAP) -> np.ndarray:
    """Columns of the order-n sign matrix as unit vectors of l_{2**(n-1)}^inf.

    Every signed combination of these vectors attains sup-norm exactly n at
    exactly one coordinate, so the tuple witnesses the extreme value n of
    the sign-average functional in the sup-norm space.
    """
    _check_n(n, n_cap)
    return np.ascontiguousarray(_entries_float(n).T)


def operator_norm_tn(space: SpaceSpec, n: int, cfg=None, workers: int = 1):
    """Estimate of the l_n^2(X) -> l_{2**(n-1)}^2(X) operator norm.

    Runs the upper-constant search (on a seed stream distinct from cfg.seed)
    and converts: the squared operator norm equals 2**(n-1) times the
    supremum of the sign-average ratio. The returned estimate carries the
    operator norm as its value and the witnessing tuple as certificate;
    its bound status is lower-bound-of-sup unless certified exact.
    """
    import dataclasses

    from .optimize import OptimizerConfig, estimate_constant

    if cfg is None:
        cfg = OptimizerConfig()
    search_cfg = dataclasses.replace(cfg, seed=cfg.seed ^ 0x9E3779B9)
    est = estimate_constant(space, n, "upper", cfg=search_cfg, workers=workers)
    value = float(np.sqrt(2 ** (n - 1) * est.value))
    return dataclasses.replace(est, value=value)
