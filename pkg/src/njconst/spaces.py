"""Finite-dimensional p-normed spaces: norms, duality, spheres, extreme points.

Exponents are kept exact: finite p is a Fraction, the sup norm is math.inf.
Keeping p exact makes conjugation an involution instead of a float round
trip, and avoids encoding infinity as a large float.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ._backend import kernels
from .errors import (
    BudgetExceededError,
    DegenerateInputError,
    DimensionMismatchError,
)

INF = math.inf

ExponentLike = Union[int, float, str, Fraction]

_MAX_INF_VERTEX_DIM = 20  # 2**d vertices are materialized for p = inf


def _canonical_exponent(p: ExponentLike):
    """Normalize an exponent to Fraction (finite) or math.inf."""
    if isinstance(p, str):
        if p.strip().lower() in {"inf", "infinity", "oo"}:
            return INF
        p = Fraction(p)
    if isinstance(p, float) and math.isinf(p):
        if p < 0:
            raise ValueError("exponent must be >= 1 or inf")
        return INF
    frac = Fraction(p)
    if frac < 1:
        raise ValueError(f"exponent must be >= 1 or inf, got {p!r}")
    return frac


@dataclass(frozen=True)
class SpaceSpec:
    """An l_d^p space: R^d under the p-norm, p in [1, inf]."""

    p: ExponentLike
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "p", _canonical_exponent(self.p))
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")

    @property
    def is_inf(self) -> bool:
        return self.p == INF

    @property
    def p_float(self) -> float:
        return INF if self.is_inf else float(self.p)

    @property
    def p_label(self) -> str:
        """Canonical string form of the exponent ('2', '3/2', 'inf')."""
        return "inf" if self.is_inf else str(self.p)

    def __repr__(self) -> str:
        return f"SpaceSpec(p={self.p_label}, dim={self.dim})"


def _as_vector(space: SpaceSpec, v) -> np.ndarray:
    arr = np.ascontiguousarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != space.dim:
        raise DimensionMismatchError(
            f"expected a vector of dimension {space.dim}, got shape {arr.shape}"
        )
    return arr


def as_tuple_array(space: SpaceSpec, t) -> np.ndarray:
    """Validate an (n, d) tuple of vectors against the space; n >= 2."""
    arr = np.ascontiguousarray(t, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != space.dim:
        raise DimensionMismatchError(
            f"expected an (n, {space.dim}) tuple array, got shape {arr.shape}"
        )
    if arr.shape[0] < 2:
        raise DimensionMismatchError("vector tuples need n >= 2 entries")
    return arr


def norm(space: SpaceSpec, v) -> float:
    """||v||_p with max-entry scaling; 0 iff v = 0."""
    return float(kernels.vector_norm(_as_vector(space, v), space.p_float))


def dual_space(space: SpaceSpec) -> SpaceSpec:
    """Conjugate-exponent space: 1/p + 1/q = 1 with 1 and inf paired."""
    if space.is_inf:
        return SpaceSpec(Fraction(1), space.dim)
    if space.p == 1:
        return SpaceSpec(INF, space.dim)
    q = space.p / (space.p - 1)  # exact in Fraction arithmetic
    return SpaceSpec(q, space.dim)


def conjugate_exponent(p: ExponentLike):
    """Conjugate exponent as Fraction/inf, without building a space."""
    return dual_space(SpaceSpec(p, 1)).p


def project_to_sphere(space: SpaceSpec, v) -> np.ndarray:
    """Positive rescaling of v onto the unit sphere."""
    arr = _as_vector(space, v)
    nrm = float(kernels.vector_norm(arr, space.p_float))
    if nrm == 0.0:
        raise DegenerateInputError("cannot project the zero vector to the sphere")
    return arr / nrm


def sample_sphere(space: SpaceSpec, seed: int) -> np.ndarray:
    """Deterministic unit vector: a standard Gaussian draw projected to S(X).

    Not uniform on the sphere for p != 2, but its support is the full
    sphere, which is all that multistart seeding needs.
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(space.dim)
    while not np.any(g):
        g = rng.standard_normal(space.dim)
    return project_to_sphere(space, g)


def extreme_points(space: SpaceSpec):
    """Extreme points of the unit ball, or None for strictly convex balls.

    p = 1: the 2d signed basis vectors, ordered e_1, -e_1, e_2, -e_2, ...
    p = inf: the 2**d sign vertices, ordered by reading coordinates as
    binary digits with +1 -> 0 (so the first half has leading +1 and the
    second half is the negation of the first, reversed).
    1 < p < inf: None (infinitely many extreme points).
    """
    d = space.dim
    if space.p == 1:
        pts = np.zeros((2 * d, d))
        for i in range(d):
            pts[2 * i, i] = 1.0
            pts[2 * i + 1, i] = -1.0
        return pts
    if space.is_inf:
        if d > _MAX_INF_VERTEX_DIM:
            raise BudgetExceededError(
                f"2**{d} sign vertices exceed the materialization cap "
                f"(dim <= {_MAX_INF_VERTEX_DIM})"
            )
        pts = np.empty((2**d, d))
        for i in range(2**d):
            for k in range(d):
                bit = (i >> (d - 1 - k)) & 1
                pts[i, k] = -1.0 if bit else 1.0
        return pts
    return None


def tuple_l2X_norm(space: SpaceSpec, t) -> float:
    """Norm of the tuple space l_n^2(X): (sum_j ||x_j||_X^2)^(1/2)."""
    arr = np.ascontiguousarray(t, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != space.dim:
        raise DimensionMismatchError(
            f"expected an (n, {space.dim}) tuple array, got shape {arr.shape}"
        )
    norms = kernels.batch_norms(arr, space.p_float)
    return math.sqrt(math.fsum(np.asarray(norms) ** 2))
