# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, pow, expm1, frexp, INFINITY

cdef double LN2 = 0.6931471805599453094

cnp.import_array()

NAME = "cython"


def select_order_stats(draws, double t1, double t2):
    cdef double[:, ::1] d = np.ascontiguousarray(draws, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double a, b, c, t, v
    with nogil:
        for i in range(n):
            v = d[i, 0]
            a = d[i, 1]
            b = d[i, 2]
            c = d[i, 3]
            # three-element sorting network
            if a > b:
                t = a; a = b; b = t
            if b > c:
                t = b; b = c; c = t
            if a > b:
                t = a; a = b; b = t
            if v < t1:
                o[i] = a
            elif v < t2:
                o[i] = b
            else:
                o[i] = c
    return out


# Sums of logs are taken as the log of a running product, renormalised by
# frexp whenever it leaves [2**-500, 2**500]; log is then called once.
cdef inline void _mul(double* m, long* e, double g) noexcept nogil:
    cdef int k
    m[0] *= g
    if m[0] > 3.27e150 or m[0] < 3.06e-151:
        m[0] = frexp(m[0], &k)
        e[0] += k


cdef double _ct_uniform_nll(const double[::1] xs, double l1, double l2) noexcept nogil:
    cdef Py_ssize_t i
    cdef double m = 1.0, g, u
    cdef long e = 0
    cdef double b = 2.0 * (l2 - l1), c = 3.0 * (1.0 - l2)
    for i in range(xs.shape[0]):
        u = xs[i]
        g = l1 + u * (b + c * u)
        if g <= 0.0:
            return INFINITY
        _mul(&m, &e, g)
    return -(log(m) + e * LN2)


cdef double _ctw_nll(const double[::1] xs, const double[::1] xks, const double[::1] us,
                     double l1, double l2, double k) noexcept nogil:
    cdef Py_ssize_t i
    cdef double mx = 1.0, mg = 1.0, sxk = 0.0, g, u, xi
    cdef long ex = 0, eg = 0
    cdef double b = 2.0 * (l2 - l1), c = 3.0 * (1.0 - l2)
    for i in range(xs.shape[0]):
        xi = xs[i]
        if xi <= 0.0:
            return INFINITY
        u = us[i]
        g = l1 + u * (b + c * u)
        if g <= 0.0:
            return INFINITY
        sxk += xks[i]
        _mul(&mx, &ex, xi)
        _mul(&mg, &eg, g)
    return -(xs.shape[0] * log(k) + (k - 1.0) * (log(mx) + ex * LN2) - sxk + log(mg) + eg * LN2)


def ct_uniform_nll(x, double l1, double l2):
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef double out
    with nogil:
        out = _ct_uniform_nll(xs, l1, l2)
    return out


def ctw_nll(x, double l1, double l2, double k):
    if k <= 0.0:
        return INFINITY
    x = np.ascontiguousarray(x, dtype=np.float64)
    # the transcendental maps are vectorised by NumPy; the fused loop does the rest
    with np.errstate(invalid="ignore"):
        xk = np.power(x, k)
        u = -np.expm1(-xk)
    cdef const double[::1] xs = x, xks = xk, us = u
    cdef double out
    with nogil:
        out = _ctw_nll(xs, xks, us, l1, l2, k)
    return out


def histogram_counts(u, int bins):
    cdef double[::1] us = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = us.shape[0], i
    cdef long j
    out = np.zeros(bins, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    with nogil:
        for i in range(n):
            j = <long>(us[i] * bins)
            if j < 0:
                j = 0
            elif j >= bins:
                j = bins - 1
            o[j] += 1
    return out
