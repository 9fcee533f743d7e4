# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: batched Gram construction and trace powers.

Gram entries come from the closed-form geometric phase sum
sum_{m=0}^{n_r-1} exp(i*m*u) = exp(i*(n_r-1)*u/2) * sin(n_r*u/2)/sin(u/2)
on the H^dagger H side, and from accumulated per-satellite phase powers
on the H H^dagger side.  All per-sample loops run without the GIL so the
Python layer can thread over chunks.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, fabs, sin

cnp.import_array()

NAME = "compiled"

cdef double _NEAR_ZERO = 1e-9
cdef double complex _I = 1j


cdef inline double complex _phase_sum(double u, int n) noexcept nogil:
    """sum_{m=0}^{n-1} exp(i*m*u); direct accumulation near u = 2*pi*l."""
    cdef double h = 0.5 * u
    cdef double sh = sin(h)
    cdef double amp, ph
    cdef double re, im
    cdef int m
    if fabs(sh) < _NEAR_ZERO:
        re = 0.0
        im = 0.0
        for m in range(n):
            re += cos(m * u)
            im += sin(m * u)
        return re + im * _I
    amp = sin(n * h) / sh
    ph = (n - 1) * h
    return amp * cos(ph) + amp * sin(ph) * _I


cdef inline void _fill_gram_small(const double[:] theta, const double[:] phi,
                                  double[::1] x, int n_r, double kd,
                                  double complex[:, ::1] w) noexcept nogil:
    """H^dagger H side (n_t <= n_r): n_t x n_t from pairwise phase sums."""
    cdef int n_t = <int> theta.shape[0]
    cdef double inv = 1.0 / (n_r * <double> n_t)
    cdef double complex val
    cdef int i, j
    for i in range(n_t):
        x[i] = sin(theta[i]) * sin(phi[i])
    for i in range(n_t):
        w[i, i] = n_r * inv
        for j in range(i + 1, n_t):
            val = _phase_sum(kd * (x[j] - x[i]), n_r) * inv
            w[i, j] = val
            w[j, i] = val.real - val.imag * _I


cdef inline void _fill_gram_toeplitz(const double[:] theta, const double[:] phi,
                                     double[::1] acc_re, double[::1] acc_im,
                                     int n_r, double kd,
                                     double complex[:, ::1] w) noexcept nogil:
    """H H^dagger side (n_r < n_t): Toeplitz from per-satellite phase powers."""
    cdef int n_t = <int> theta.shape[0]
    cdef double inv = 1.0 / (n_r * <double> n_t)
    cdef double xj, c, s, zr, zi, tmp
    cdef double complex val
    cdef int j, p, m, n
    for p in range(n_r):
        acc_re[p] = 0.0
        acc_im[p] = 0.0
    for j in range(n_t):
        xj = sin(theta[j]) * sin(phi[j])
        c = cos(kd * xj)
        s = sin(kd * xj)
        zr = 1.0
        zi = 0.0
        for p in range(n_r):
            acc_re[p] += zr
            acc_im[p] += zi
            tmp = zr * c - zi * s
            zi = zr * s + zi * c
            zr = tmp
    for m in range(n_r):
        w[m, m] = n_t * inv
        for n in range(m):
            p = m - n
            val = (acc_re[p] + acc_im[p] * _I) * inv
            w[m, n] = val
            w[n, m] = val.real - val.imag * _I


def gram_batch(theta, phi, int n_r, double kd):
    """(B, s, s) Gram matrices, s = min(n_r, n_t), exactly Hermitian."""
    cdef const double[:, ::1] th = theta
    cdef const double[:, ::1] ph = phi
    cdef Py_ssize_t n_samples = th.shape[0]
    cdef int n_t = <int> th.shape[1]
    cdef int s = n_t if n_t <= n_r else n_r
    out = np.empty((n_samples, s, s), dtype=np.complex128)
    cdef double complex[:, :, ::1] w = out
    cdef double[::1] x = np.empty(n_t, dtype=np.float64)
    cdef double[::1] acc_re = np.empty(n_r, dtype=np.float64)
    cdef double[::1] acc_im = np.empty(n_r, dtype=np.float64)
    cdef Py_ssize_t b
    with nogil:
        if n_t <= n_r:
            for b in range(n_samples):
                _fill_gram_small(th[b], ph[b], x, n_r, kd, w[b])
        else:
            for b in range(n_samples):
                _fill_gram_toeplitz(th[b], ph[b], acc_re, acc_im, n_r, kd, w[b])
    return out


def trace_powers_batch(theta, phi, int n_r, double kd, int kmax):
    """(B, kmax) array of Trace(W^k) for k = 1..kmax."""
    cdef const double[:, ::1] th = theta
    cdef const double[:, ::1] ph = phi
    cdef Py_ssize_t n_samples = th.shape[0]
    cdef int n_t = <int> th.shape[1]
    cdef int s = n_t if n_t <= n_r else n_r
    out = np.empty((n_samples, kmax), dtype=np.float64)
    cdef double[:, ::1] res = out
    cdef double complex[:, ::1] w = np.empty((s, s), dtype=np.complex128)
    cdef double complex[:, ::1] a = np.empty((s, s), dtype=np.complex128)
    cdef double complex[:, ::1] t = np.empty((s, s), dtype=np.complex128)
    cdef double[::1] x = np.empty(n_t, dtype=np.float64)
    cdef double[::1] acc_re = np.empty(n_r, dtype=np.float64)
    cdef double[::1] acc_im = np.empty(n_r, dtype=np.float64)
    cdef Py_ssize_t b
    cdef int i, j, l, k
    cdef double tr
    cdef double complex cacc
    with nogil:
        for b in range(n_samples):
            if n_t <= n_r:
                _fill_gram_small(th[b], ph[b], x, n_r, kd, w)
            else:
                _fill_gram_toeplitz(th[b], ph[b], acc_re, acc_im, n_r, kd, w)
            tr = 0.0
            for i in range(s):
                tr += w[i, i].real
                for j in range(s):
                    a[i, j] = w[i, j]
            res[b, 0] = tr
            for k in range(2, kmax + 1):
                for i in range(s):
                    for j in range(s):
                        cacc = 0.0
                        for l in range(s):
                            cacc = cacc + a[i, l] * w[l, j]
                        t[i, j] = cacc
                tr = 0.0
                for i in range(s):
                    tr += t[i, i].real
                    for j in range(s):
                        a[i, j] = t[i, j]
                res[b, k - 1] = tr
    return out
