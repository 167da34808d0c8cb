"""Pure numpy kernels: p-norms, the sign-average ratio and its gradient.

This is the fallback backend; `njconst._kernels` is the compiled twin with
identical signatures. Scalar entry points accumulate the sign-pattern sums
with compensated summation (math.fsum); batch entry points rely on numpy's
pairwise reductions.

All exponents arrive as plain floats with math.inf for the sup norm.
"""

import math

import numpy as np

BACKEND = "python"

_INF = math.inf


def vector_norm(v: np.ndarray, p: float) -> float:
    """p-norm of a 1-d array, scaled by the max entry to avoid overflow."""
    a = np.abs(v)
    if a.size == 0:
        return 0.0
    if p == _INF:
        return float(a.max())
    if p == 1.0:
        return math.fsum(a)
    m = float(a.max())
    if m == 0.0:
        return 0.0
    scaled = a / m
    if p == 2.0:
        return m * math.sqrt(math.fsum(scaled * scaled))
    return m * math.fsum(scaled**p) ** (1.0 / p)


def _row_norms(M: np.ndarray, p: float) -> np.ndarray:
    """p-norms along the last axis, max-scaled per row."""
    a = np.abs(M)
    if p == _INF:
        return a.max(axis=-1)
    if p == 1.0:
        return a.sum(axis=-1)
    if p == 2.0:
        return np.sqrt((a * a).sum(axis=-1))
    m = a.max(axis=-1)
    m_safe = np.where(m > 0.0, m, 1.0)
    t = ((a / m_safe[..., None]) ** p).sum(axis=-1)
    return m * t ** (1.0 / p)


def batch_norms(M: np.ndarray, p: float) -> np.ndarray:
    """Vectorized p-norms along the last axis of an arbitrary-shape array."""
    return _row_norms(np.asarray(M, dtype=np.float64), p)


def combo_norms(A: np.ndarray, X: np.ndarray, p: float) -> np.ndarray:
    """Norms of the signed combinations: row i is ||(A @ X)_i||_p."""
    return _row_norms(A @ X, p)


def cn_value(A: np.ndarray, X: np.ndarray, p: float) -> float:
    """Sign-average ratio sum_i ||(A X)_i||^2 / (R * sum_j ||x_j||^2).

    The caller guarantees sum_j ||x_j||^2 > 0.
    """
    ns = _row_norms(A @ X, p)
    nx = _row_norms(X, p)
    num = math.fsum(ns * ns)
    den = A.shape[0] * math.fsum(nx * nx)
    return num / den


def cn_batch(A: np.ndarray, T: np.ndarray, p: float) -> np.ndarray:
    """cn_value over a stack of tuples T with shape (m, n, d)."""
    S = np.matmul(A, T)  # (m, R, d)
    ns = _row_norms(S, p)
    nx = _row_norms(T, p)
    num = (ns * ns).sum(axis=1)
    den = A.shape[0] * (nx * nx).sum(axis=1)
    return num / den


def _sq_norm_grad(M: np.ndarray, norms: np.ndarray, p: float) -> np.ndarray:
    """Row-wise gradient of ||.||_p^2: 2 ||v||^(2-p) |v_k|^(p-1) sign(v_k)."""
    if p == 2.0:
        return 2.0 * M
    pos = norms > 0.0
    n_safe = np.where(pos, norms, 1.0)
    out = 2.0 * n_safe[..., None] ** (2.0 - p) * np.abs(M) ** (p - 1.0) * np.sign(M)
    out[~pos] = 0.0
    return out


def _sq_norm_grad_smoothed(M: np.ndarray, p: float, eps: float) -> np.ndarray:
    """Same as _sq_norm_grad but for the eps-smoothed norm (p < 2 kinks)."""
    W = M * M + eps * eps
    norms = (W ** (p / 2.0)).sum(axis=-1) ** (1.0 / p)
    return 2.0 * norms[..., None] ** (2.0 - p) * W ** ((p - 2.0) / 2.0) * M


def cn_value_grad(
    A: np.ndarray, X: np.ndarray, p: float, eps: float
) -> "tuple[float, np.ndarray]":
    """Value and per-vector gradient of the sign-average ratio, 1 < p < inf.

    At points where a signed combination has a (numerically) zero coordinate
    and p < 2, the gradient of the eps-smoothed norm is substituted; the
    returned value is always the unsmoothed ratio.
    """
    R = A.shape[0]
    S = A @ X
    ns = _row_norms(S, p)
    nx = _row_norms(X, p)
    num = math.fsum(ns * ns)
    den0 = math.fsum(nx * nx)
    value = num / (R * den0)

    if p < 2.0 and p != 1.0 and bool((np.abs(S) < eps).any()):
        G = _sq_norm_grad_smoothed(S, p, eps)
        H = _sq_norm_grad_smoothed(X, p, eps)
    else:
        G = _sq_norm_grad(S, ns, p)
        H = _sq_norm_grad(X, nx, p)

    dN = A.T @ G
    grad = (dN - (R * value) * H) / (R * den0)
    return value, grad
