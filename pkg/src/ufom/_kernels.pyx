# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled numeric kernels for the solver hot loops.

Single-pass C loops over contiguous float64 buffers; the NumPy backend in
``_kernels_py`` implements the same signatures.
"""

import numpy as np


def dot(double[::1] a, double[::1] b):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double s = 0.0
    for i in range(n):
        s += a[i] * b[i]
    return s


def nrm2sq(double[::1] a):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double s = 0.0
    for i in range(n):
        s += a[i] * a[i]
    return s


def scale_add(double[::1] out, double a, double[::1] x, double b, double[::1] y):
    """out = a*x + b*y, elementwise."""
    cdef Py_ssize_t i, n = out.shape[0]
    for i in range(n):
        out[i] = a * x[i] + b * y[i]


def quad_value(double[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double s = 0.0
    for i in range(n):
        s += (i + 1) * x[i] * x[i]
    return s


def quad_grad(double[::1] out, double[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    for i in range(n):
        out[i] = 2.0 * (i + 1) * x[i]


def quad_ray_coeffs(double[::1] x, double[::1] d):
    """Coefficients (c0, c1, c2) of h -> sum_i i*(x_i + h*d_i)^2."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double c0 = 0.0, c1 = 0.0, c2 = 0.0, w
    for i in range(n):
        w = i + 1
        c0 += w * x[i] * x[i]
        c1 += w * x[i] * d[i]
        c2 += w * d[i] * d[i]
    return c0, 2.0 * c1, c2


def maxquad_value(double[::1] x, double mu):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double m = x[0], s = 0.0
    for i in range(n):
        if x[i] > m:
            m = x[i]
        s += x[i] * x[i]
    return m + 0.5 * mu * s


def maxquad_value_subgrad(double[::1] out, double[::1] x, double mu):
    """out = mu*x + e_j with j the lowest index attaining max(x); returns (f(x), j)."""
    cdef Py_ssize_t i, j = 0, n = x.shape[0]
    cdef double m = x[0], s = 0.0
    for i in range(n):
        if x[i] > m:
            m = x[i]
            j = i
        s += x[i] * x[i]
        out[i] = mu * x[i]
    out[j] += 1.0
    return m + 0.5 * mu * s, j


def shifted_max(double[::1] x, double[::1] d, double h):
    """max and lowest argmax of x + h*d."""
    cdef Py_ssize_t i, j = 0, n = x.shape[0]
    cdef double m = x[0] + h * d[0], t
    for i in range(1, n):
        t = x[i] + h * d[i]
        if t > m:
            m = t
            j = i
    return m, j
