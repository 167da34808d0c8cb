# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: p-norms, the sign-average ratio and its gradient.

Signature-compatible with njconst._kernels_py; accumulations use Kahan
summation and the hot loops release the GIL.
"""

from libc.math cimport fabs, isinf, pow, sqrt

import numpy as np

BACKEND = "cython"


cdef inline void _kadd(double x, double* s, double* c) noexcept nogil:
    cdef double y = x - c[0]
    cdef double t = s[0] + y
    c[0] = (t - s[0]) - y
    s[0] = t


cdef double _norm_ptr(const double* v, Py_ssize_t d, double p) noexcept nogil:
    cdef Py_ssize_t k
    cdef double m = 0.0
    cdef double a, s, comp
    for k in range(d):
        a = fabs(v[k])
        if a > m:
            m = a
    if isinf(p):
        return m
    if m == 0.0:
        return 0.0
    s = 0.0
    comp = 0.0
    if p == 1.0:
        for k in range(d):
            _kadd(fabs(v[k]), &s, &comp)
        return s
    if p == 2.0:
        for k in range(d):
            a = fabs(v[k]) / m
            _kadd(a * a, &s, &comp)
        return m * sqrt(s)
    for k in range(d):
        a = fabs(v[k]) / m
        _kadd(pow(a, p), &s, &comp)
    return m * pow(s, 1.0 / p)


cdef void _combo_rows(const double[:, ::1] A, const double[:, ::1] X,
                      double[:, ::1] S) noexcept nogil:
    cdef Py_ssize_t R = A.shape[0], n = A.shape[1], d = X.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double aij
    for i in range(R):
        for k in range(d):
            S[i, k] = 0.0
        for j in range(n):
            aij = A[i, j]
            for k in range(d):
                S[i, k] += aij * X[j, k]


def vector_norm(v, double p):
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    if vv.shape[0] == 0:
        return 0.0
    cdef double r
    with nogil:
        r = _norm_ptr(&vv[0], vv.shape[0], p)
    return r


def batch_norms(M, double p):
    arr = np.ascontiguousarray(M, dtype=np.float64)
    ndim = arr.ndim  # avoid negative tuple indices: wraparound is off
    lead = tuple(arr.shape[k] for k in range(ndim - 1))
    flat = arr.reshape(-1, arr.shape[ndim - 1])
    cdef const double[:, ::1] F = flat
    out = np.empty(flat.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, m = F.shape[0], d = F.shape[1]
    with nogil:
        for i in range(m):
            o[i] = _norm_ptr(&F[i, 0], d, p)
    return out.reshape(lead)


def combo_norms(const double[:, ::1] A, const double[:, ::1] X, double p):
    cdef Py_ssize_t R = A.shape[0], d = X.shape[1]
    S = np.empty((R, d), dtype=np.float64)
    out = np.empty(R, dtype=np.float64)
    cdef double[:, ::1] Sv = S
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        _combo_rows(A, X, Sv)
        for i in range(R):
            o[i] = _norm_ptr(&Sv[i, 0], d, p)
    return out


cdef double _cn_core(const double[:, ::1] A, const double[:, ::1] X,
                     double[:, ::1] S, double p) noexcept nogil:
    cdef Py_ssize_t R = A.shape[0], n = A.shape[1], d = X.shape[1]
    cdef Py_ssize_t i, j
    cdef double num = 0.0, cn = 0.0, den = 0.0, cd = 0.0, t
    _combo_rows(A, X, S)
    for i in range(R):
        t = _norm_ptr(&S[i, 0], d, p)
        _kadd(t * t, &num, &cn)
    for j in range(n):
        t = _norm_ptr(&X[j, 0], d, p)
        _kadd(t * t, &den, &cd)
    return num / (R * den)


def cn_value(const double[:, ::1] A, const double[:, ::1] X, double p):
    S = np.empty((A.shape[0], X.shape[1]), dtype=np.float64)
    cdef double[:, ::1] Sv = S
    cdef double r
    with nogil:
        r = _cn_core(A, X, Sv, p)
    return r


def cn_batch(const double[:, ::1] A, const double[:, :, ::1] T, double p):
    cdef Py_ssize_t m = T.shape[0]
    out = np.empty(m, dtype=np.float64)
    S = np.empty((A.shape[0], T.shape[2]), dtype=np.float64)
    cdef double[::1] o = out
    cdef double[:, ::1] Sv = S
    cdef Py_ssize_t mi
    with nogil:
        for mi in range(m):
            o[mi] = _cn_core(A, T[mi], Sv, p)
    return out


cdef void _sq_grad_rows(const double[:, ::1] M, double[:, ::1] out,
                        double p, bint smoothed, double eps) noexcept nogil:
    # Row-wise gradient of ||.||_p^2 (eps-smoothed variant when requested).
    cdef Py_ssize_t m = M.shape[0], d = M.shape[1]
    cdef Py_ssize_t i, k
    cdef double nrm, a, s, comp, w
    for i in range(m):
        if smoothed:
            s = 0.0
            comp = 0.0
            for k in range(d):
                w = M[i, k] * M[i, k] + eps * eps
                _kadd(pow(w, p / 2.0), &s, &comp)
            nrm = pow(s, 1.0 / p)
            for k in range(d):
                w = M[i, k] * M[i, k] + eps * eps
                out[i, k] = 2.0 * pow(nrm, 2.0 - p) * pow(w, (p - 2.0) / 2.0) * M[i, k]
        elif p == 2.0:
            for k in range(d):
                out[i, k] = 2.0 * M[i, k]
        else:
            nrm = _norm_ptr(&M[i, 0], d, p)
            if nrm == 0.0:
                for k in range(d):
                    out[i, k] = 0.0
            else:
                for k in range(d):
                    a = fabs(M[i, k])
                    if M[i, k] > 0.0:
                        out[i, k] = 2.0 * pow(nrm, 2.0 - p) * pow(a, p - 1.0)
                    elif M[i, k] < 0.0:
                        out[i, k] = -2.0 * pow(nrm, 2.0 - p) * pow(a, p - 1.0)
                    else:
                        out[i, k] = 0.0


def cn_value_grad(const double[:, ::1] A, const double[:, ::1] X, double p, double eps):
    cdef Py_ssize_t R = A.shape[0], n = A.shape[1], d = X.shape[1]
    S = np.empty((R, d), dtype=np.float64)
    G = np.empty((R, d), dtype=np.float64)
    H = np.empty((n, d), dtype=np.float64)
    grad = np.zeros((n, d), dtype=np.float64)
    cdef double[:, ::1] Sv = S, Gv = G, Hv = H, gv = grad
    cdef Py_ssize_t i, j, k
    cdef double num = 0.0, cn = 0.0, den = 0.0, cd = 0.0
    cdef double t, value, scale
    cdef bint smoothed = 0
    with nogil:
        _combo_rows(A, X, Sv)
        for i in range(R):
            t = _norm_ptr(&Sv[i, 0], d, p)
            _kadd(t * t, &num, &cn)
        for j in range(n):
            t = _norm_ptr(&X[j, 0], d, p)
            _kadd(t * t, &den, &cd)
        value = num / (R * den)
        if p < 2.0 and p != 1.0:
            for i in range(R):
                for k in range(d):
                    if fabs(Sv[i, k]) < eps:
                        smoothed = 1
        _sq_grad_rows(Sv, Gv, p, smoothed, eps)
        _sq_grad_rows(X, Hv, p, smoothed, eps)
        # grad = (A^T G - R * value * H) / (R * den)
        scale = R * den
        for i in range(R):
            for j in range(n):
                t = A[i, j]
                for k in range(d):
                    gv[j, k] += t * Gv[i, k]
        for j in range(n):
            for k in range(d):
                gv[j, k] = (gv[j, k] - R * value * Hv[j, k]) / scale
    return value, grad
