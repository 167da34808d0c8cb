"""The sign-average functional on vector tuples and its gradient.

For a tuple (x_1, ..., x_n) the functional is

    sum over sign patterns of ||x_1 + sum_{j>=2} theta_j x_j||^2
    -----------------------------------------------------------
              2**(n-1) * sum_j ||x_j||^2

with the 2**(n-1) patterns enumerated by the rows of the recursive sign
matrix (leading sign fixed to +1). Its supremum/infimum over tuples define
the upper and lower constants; restricted to unit vectors they define the
modified constants.
"""

import math

import numpy as np

from ._backend import kernels
from .errors import DegenerateInputError, UnsupportedExponentError
from .hadamard import DEFAULT_N_CAP, _entries_float, sign_matrix
from .spaces import SpaceSpec, as_tuple_array


def sign_patterns(n: int, n_cap: int = DEFAULT_N_CAP) -> np.ndarray:
    """All 2**(n-1) sign patterns with leading +1, in binary-counting order.

    Position j (1-based, j >= 2) flips fastest for j = 2: pattern i has
    theta_j = -1 exactly when bit j-2 of i is set. Row i equals row i of
    the order-n sign matrix, which fixes the enumeration order used for
    certificates and tie-breaking.
    """
    return sign_matrix(n, n_cap=n_cap).entries


def _validated(space: SpaceSpec, t) -> np.ndarray:
    arr = as_tuple_array(space, t)
    return arr


def _denominator(space: SpaceSpec, arr: np.ndarray) -> float:
    norms = np.asarray(kernels.batch_norms(arr, space.p_float))
    return math.fsum(norms * norms)


def evaluate_cn(space: SpaceSpec, t) -> float:
    """The sign-average ratio of a tuple; requires sum_j ||x_j||^2 > 0."""
    arr = _validated(space, t)
    if not np.any(arr):
        raise DegenerateInputError("the all-zero tuple has no sign-average value")
    A = _entries_float(arr.shape[0])
    return float(kernels.cn_value(A, arr, space.p_float))


def evaluate_cn_symmetrized(space: SpaceSpec, t) -> float:
    """Same ratio from the full 2**n-pattern sum (self-check oracle).

    Every pattern and its negation contribute equal norms, so this equals
    evaluate_cn exactly; it makes the sign-flip and permutation symmetry
    of the functional explicit.
    """
    arr = _validated(space, t)
    if not np.any(arr):
        raise DegenerateInputError("the all-zero tuple has no sign-average value")
    A = _entries_float(arr.shape[0])
    full = np.ascontiguousarray(np.vstack([A, -A]))
    return float(kernels.cn_value(full, arr, space.p_float))


def evaluate_cn_batch(space: SpaceSpec, tuples: np.ndarray) -> np.ndarray:
    """Vectorized evaluate_cn over a stack of tuples with shape (m, n, d).

    Degenerate all-zero tuples yield nan; callers sample nonzero tuples.
    """
    arr = np.ascontiguousarray(tuples, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != space.dim or arr.shape[1] < 2:
        raise DegenerateInputError(
            f"expected an (m, n, {space.dim}) stack with n >= 2, got {arr.shape}"
        )
    A = _entries_float(arr.shape[1])
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.asarray(kernels.cn_batch(A, arr, space.p_float))


def min_sign_combination(space: SpaceSpec, t):
    """Minimum over patterns of ||x_1 + sum theta_j x_j|| and an argmin.

    Ties are broken by enumeration order (first minimal pattern). The
    all-zero tuple is allowed and returns (0.0, all-plus pattern).
    """
    arr = _validated(space, t)
    A = _entries_float(arr.shape[0])
    norms = np.asarray(kernels.combo_norms(A, arr, space.p_float))
    idx = int(np.argmin(norms))
    return float(norms[idx]), sign_matrix(arr.shape[0]).entries[idx]


def grad_cn(space: SpaceSpec, t, eps: float = 1e-12) -> np.ndarray:
    """Gradient of the sign-average ratio per tuple entry, for 1 < p < inf.

    Where a signed combination has a coordinate within eps of zero and
    p < 2, the gradient of the eps-smoothed norm is used so that descent
    directions stay defined across the kinks of the p-norm.
    """
    value_and_grad = grad_cn_with_value(space, t, eps=eps)
    return value_and_grad[1]


def grad_cn_with_value(space: SpaceSpec, t, eps: float = 1e-12):
    """(value, gradient) in one evaluation; see grad_cn."""
    if space.is_inf or space.p == 1:
        raise UnsupportedExponentError(
            "the sign-average ratio is not differentiable for p in {1, inf}"
        )
    arr = _validated(space, t)
    if not np.any(arr):
        raise DegenerateInputError("the all-zero tuple has no sign-average value")
    A = _entries_float(arr.shape[0])
    value, grad = kernels.cn_value_grad(A, arr, space.p_float, float(eps))
    return float(value), np.asarray(grad)
