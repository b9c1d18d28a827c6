# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot numeric kernels.

Algorithmic twin of `_kernels_py.py`: same branch cutoffs, coefficient
tables and term counts, so the two backends agree to rounding.
"""

import numpy as np

from libc.math cimport cos, sin, sqrt, fabs, M_PI

from ._j1_coeffs import HANKEL_TERMS, P_COEFFS, Q_COEFFS, SERIES_CUTOFF, SERIES_TERMS

cdef double _SINC_SMALL = 1e-4
cdef double _SERIES_CUTOFF = SERIES_CUTOFF
cdef int _SERIES_TERMS = SERIES_TERMS
cdef int _HANKEL_TERMS = HANKEL_TERMS

cdef double[32] _PC
cdef double[32] _QC
for _k in range(HANKEL_TERMS + 1):
    _PC[_k] = P_COEFFS[_k]
    _QC[_k] = Q_COEFFS[_k]


cdef inline double _sinc(double x) nogil:
    if fabs(x) < _SINC_SMALL:
        return 1.0 - x * x / 6.0 + x * x * x * x / 120.0
    return sin(x) / x


def edge_sum_many(verts, betas):
    """Edge-sum Fourier transform of a polygon at many nonzero wavevectors.

    verts: (N, 2) vertex array, implicit closing edge; betas: (M, 2) with no
    zero rows.  Returns (M,) complex.
    """
    cdef const double[:, ::1] v = np.ascontiguousarray(verts, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(betas, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0], m = b.shape[0]

    lx_arr = np.empty(n)
    ly_arr = np.empty(n)
    cx_arr = np.empty(n)
    cy_arr = np.empty(n)
    cdef double[::1] lx = lx_arr, ly = ly_arr, cx = cx_arr, cy = cy_arr
    cdef Py_ssize_t i, j, inext
    for i in range(n):
        inext = (i + 1) % n
        lx[i] = v[inext, 0] - v[i, 0]
        ly[i] = v[inext, 1] - v[i, 1]
        cx[i] = 0.5 * (v[inext, 0] + v[i, 0])
        cy[i] = 0.5 * (v[inext, 1] + v[i, 1])

    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double b1, b2, bsq, half, weight, phase, acc_re, acc_im, s
    with nogil:
        for j in range(m):
            b1 = b[j, 0]
            b2 = b[j, 1]
            bsq = b1 * b1 + b2 * b2
            acc_re = 0.0
            acc_im = 0.0
            for i in range(n):
                half = 0.5 * (b1 * lx[i] + b2 * ly[i])
                weight = (b2 * lx[i] - b1 * ly[i]) * _sinc(half)
                phase = b1 * cx[i] + b2 * cy[i]
                acc_re += weight * cos(phase)
                acc_im += weight * sin(phase)
            # multiply the accumulated sum by i / |b|^2
            o[j] = (-acc_im / bsq) + 1j * (acc_re / bsq)
    return out


cdef double _j1_small(double x) nogil:
    cdef double q = 0.25 * x * x
    cdef double term = 0.5
    cdef double total = 0.5
    cdef int k
    for k in range(1, _SERIES_TERMS):
        term = term * (-q) / (k * (k + 1))
        total += term
    return total * x


cdef double _j1_large(double x) nogil:
    cdef double z = 1.0 / (x * x)
    cdef double p = _PC[_HANKEL_TERMS]
    cdef double q = _QC[_HANKEL_TERMS]
    cdef int k
    for k in range(_HANKEL_TERMS - 1, -1, -1):
        p = p * z + _PC[k]
        q = q * z + _QC[k]
    q = q / x
    cdef double chi = x - 0.75 * M_PI
    return sqrt(2.0 / (M_PI * x)) * (p * cos(chi) - q * sin(chi))


def j1_many(x):
    """Bessel J1 on a double array: ascending series up to the crossover,
    large-argument asymptotic form beyond; odd in x."""
    arr = np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64)
    cdef const double[::1] xv = arr
    out = np.empty(arr.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    cdef double ax, val
    with nogil:
        for i in range(xv.shape[0]):
            ax = fabs(xv[i])
            if ax <= _SERIES_CUTOFF:
                val = _j1_small(ax)
            else:
                val = _j1_large(ax)
            o[i] = -val if xv[i] < 0 else val
    return out
