# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: elementwise activation value/derivative and the
cross-class minimum-distance scan.

Formulas and evaluation order mirror lipact.backends._ref exactly; the
family codes must stay in sync with that module.
"""

from libc.math cimport exp, expm1, tanh, sqrt, INFINITY

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF LEAKY = 0
DEF EXPLIN = 1
DEF SWISH = 2
DEF TANHMIX = 3

NAME = "compiled"


cdef inline double _sigmoid(double z) noexcept nogil:
    cdef double e
    if z >= 0.0:
        return 1.0 / (1.0 + exp(-z))
    e = exp(z)
    return e / (1.0 + e)


cdef inline double _eval1(int family, double p0, double p1, double x) noexcept nogil:
    cdef double t
    if family == LEAKY:
        return x if x > 0.0 else p0 * x
    elif family == EXPLIN:
        return p0 * x if x > 0.0 else p0 * p1 * expm1(x)
    elif family == SWISH:
        return x * _sigmoid(p0 * x)
    else:
        t = tanh(p0 * x) + p1 * x
        return (x if x > 0.0 else 0.0) + (t if t < 0.0 else 0.0)


cdef inline double _grad1(int family, double p0, double p1, double x) noexcept nogil:
    cdef double s, t
    if family == LEAKY:
        return 1.0 if x >= 0.0 else p0
    elif family == EXPLIN:
        return p0 if x >= 0.0 else p0 * p1 * exp(x)
    elif family == SWISH:
        s = _sigmoid(p0 * x)
        return s + p0 * x * s * (1.0 - s)
    else:
        if x >= 0.0:
            return 1.0
        t = tanh(p0 * x)
        return p0 * (1.0 - t * t) + p1


def af_eval(int family, double p0, double p1, x):
    """Elementwise activation value for one kernel family."""
    if family < 0 or family > 3:
        raise ValueError(f"unknown kernel family {family}")
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(xv)
    cdef Py_ssize_t i, n = xv.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _eval1(family, p0, p1, xv[i])
    return out.reshape(np.shape(x))


def af_grad(int family, double p0, double p1, x):
    """Elementwise derivative; at x == 0 the right-hand derivative."""
    if family < 0 or family > 3:
        raise ValueError(f"unknown kernel family {family}")
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(xv)
    cdef Py_ssize_t i, n = xv.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _grad1(family, p0, p1, xv[i])
    return out.reshape(np.shape(x))


def min_cross_class(features, labels):
    """Minimum Euclidean distance over all cross-class sample pairs.

    Returns ``(distance, i, j)`` with ``i < j`` the first pair (row-major
    pair order) attaining the minimum.
    """
    cdef cnp.ndarray[double, ndim=2] X = np.ascontiguousarray(features, dtype=np.float64)
    cdef cnp.ndarray[long long, ndim=1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j, k, bi = -1, bj = -1
    cdef double best = INFINITY, s, dk
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                if lab[i] == lab[j]:
                    continue
                s = 0.0
                for k in range(d):
                    dk = X[i, k] - X[j, k]
                    s += dk * dk
                if s < best:
                    best = s
                    bi = i
                    bj = j
    return sqrt(best), bi, bj
