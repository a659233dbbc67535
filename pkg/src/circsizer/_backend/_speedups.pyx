# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bootstrap hot kernels.

Fused per-replicate accumulation: for each resample the multiplicity
counts are built once and all grid statistics are accumulated in a single
pass, avoiding the large intermediate matrices of the numpy fallback.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def density_boot(double[:, ::1] kp, long[:, ::1] idx):
    """Per-replicate density-derivative estimate and closed-form sd.

    Same contract as the numpy fallback: kp is (ngrid, n), idx is (B, n);
    returns (est, sd) of shape (B, ngrid).
    """
    cdef Py_ssize_t g = kp.shape[0]
    cdef Py_ssize_t n = kp.shape[1]
    cdef Py_ssize_t nb = idx.shape[0]
    cdef cnp.ndarray est_arr = np.empty((nb, g), dtype=np.float64)
    cdef cnp.ndarray sd_arr = np.empty((nb, g), dtype=np.float64)
    cdef double[:, ::1] est = est_arr
    cdef double[:, ::1] sd = sd_arr
    cdef double[::1] counts = np.zeros(n, dtype=np.float64)
    cdef Py_ssize_t b, i, j
    cdef double c, v, m1, m2, var

    for b in range(nb):
        for i in range(n):
            counts[i] = 0.0
        for j in range(n):
            counts[idx[b, j]] += 1.0
        for i in range(g):
            m1 = 0.0
            m2 = 0.0
            for j in range(n):
                c = counts[j]
                if c != 0.0:
                    v = kp[i, j]
                    m1 += c * v
                    m2 += c * v * v
            m1 /= n
            m2 /= n
            var = m2 - m1 * m1
            # cancellation noise on degenerate columns must read as exactly
            # zero; the one-pass form carries eps-level relative error
            if var < 1e-13 * m2:
                var = 0.0
            est[b, i] = m1
            sd[b, i] = sqrt(var * n / (n - 1.0) / n)
    return est_arr, sd_arr


def reg_boot(double[:, ::1] w, double[:, ::1] s, double[::1] y,
             long[:, ::1] idx, double rtol):
    """Per-replicate local linear derivative estimates over a grid.

    Same contract as the numpy fallback: returns (bhat, ok) of shape
    (B, ngrid), bhat NaN where the local design is singular.
    """
    cdef Py_ssize_t g = w.shape[0]
    cdef Py_ssize_t n = w.shape[1]
    cdef Py_ssize_t nb = idx.shape[0]
    cdef cnp.ndarray bhat_arr = np.empty((nb, g), dtype=np.float64)
    cdef cnp.ndarray ok_arr = np.empty((nb, g), dtype=bool)
    cdef double[:, ::1] bhat = bhat_arr
    cdef cnp.uint8_t[:, ::1] ok = ok_arr.view(np.uint8)
    cdef double[::1] counts = np.zeros(n, dtype=np.float64)
    cdef Py_ssize_t b, i, j
    cdef double c, wij, sij, cw, cws
    cdef double s0, s1, s2, t0, t1, det, half_tr
    cdef double nan = float("nan")

    for b in range(nb):
        for i in range(n):
            counts[i] = 0.0
        for j in range(n):
            counts[idx[b, j]] += 1.0
        for i in range(g):
            s0 = s1 = s2 = t0 = t1 = 0.0
            for j in range(n):
                c = counts[j]
                if c != 0.0:
                    wij = w[i, j]
                    sij = s[i, j]
                    cw = c * wij
                    cws = cw * sij
                    s0 += cw
                    s1 += cws
                    s2 += cws * sij
                    t0 += cw * y[j]
                    t1 += cws * y[j]
            det = s0 * s2 - s1 * s1
            half_tr = 0.5 * (s0 + s2)
            if det > rtol * half_tr * half_tr:
                bhat[b, i] = (s0 * t1 - s1 * t0) / det
                ok[b, i] = 1
            else:
                bhat[b, i] = nan
                ok[b, i] = 0
    return bhat_arr, ok_arr
