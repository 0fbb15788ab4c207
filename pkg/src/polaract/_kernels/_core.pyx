# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled polar transform and successive-cancellation decoder."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, exp, fabs, fmin, copysign, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()


def polar_transform(x):
    """In-place ``x <- G_2^{(x)k} x`` along the last axis; returns XORs per row."""
    cdef Py_ssize_t n = x.shape[x.ndim - 1]
    if n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    cdef cnp.uint8_t[:, ::1] rows = x.reshape(-1, n)
    cdef Py_ssize_t r, h, blk, j
    cdef long xors = 0
    with nogil:
        h = 1
        while h < n:
            for r in range(rows.shape[0]):
                blk = 0
                while blk < n:
                    for j in range(blk, blk + h):
                        rows[r, j] ^= rows[r, j + h]
                    blk += 2 * h
            xors += n // 2
            h *= 2
    return xors


cdef inline double llr_bad(double a, double b) noexcept nogil:
    cdef double aa = fabs(a), ab = fabs(b)
    cdef double mag = fmin(aa, ab)
    cdef double out = copysign(1.0, a) * copysign(1.0, b) * mag
    # correction < e^-36 can't move a result >= 36 by half an ulp
    if mag > 36.0 and fabs(aa - ab) > 36.0:
        return out
    if aa + ab < INFINITY:
        out += log((1.0 + exp(-fabs(a + b))) / (1.0 + exp(-fabs(a - b))))
    return out


cdef inline double llr_good(double a, double b, unsigned char u) noexcept nogil:
    cdef double out = b + (1.0 - 2.0 * u) * a
    if out != out:
        # conflicting certainties (0 * inf form): uninformative
        return 0.0
    return out


cdef void _decode(const double* llr, Py_ssize_t m, const unsigned char* frozen,
                  const unsigned char* fvals, unsigned char* u_out,
                  unsigned char* x_out, double* dec_out, double* scratch) noexcept nogil:
    cdef Py_ssize_t j, h
    if m == 1:
        dec_out[0] = llr[0]
        if frozen[0]:
            u_out[0] = fvals[0]
        else:
            u_out[0] = llr[0] < 0
        x_out[0] = u_out[0]
        return
    h = m // 2
    for j in range(h):
        scratch[j] = llr_bad(llr[j], llr[j + h])
    _decode(scratch, h, frozen, fvals, u_out, x_out, dec_out, scratch + h)
    for j in range(h):
        scratch[j] = llr_good(llr[j], llr[j + h], x_out[j])
    _decode(scratch, h, frozen + h, fvals + h, u_out + h, x_out + h, dec_out + h, scratch + h)
    for j in range(h):
        x_out[j] ^= x_out[j + h]


def sc_decode_batch(llr, frozen, frozen_values):
    """Successive cancellation on natural-order LLRs, one row per trial.

    Returns ``(u_hat, x_hat, decision_llrs)``.
    """
    cdef const double[:, ::1] L = np.ascontiguousarray(llr, dtype=np.float64)
    cdef Py_ssize_t trials = L.shape[0], n = L.shape[1], t
    if n & (n - 1) or n == 0:
        raise ValueError(f"length {n} is not a power of two")
    cdef const cnp.uint8_t[::1] fz = np.ascontiguousarray(frozen, dtype=np.uint8)
    cdef const cnp.uint8_t[::1] fv = np.ascontiguousarray(frozen_values, dtype=np.uint8)
    u_arr = np.empty((trials, n), dtype=np.uint8)
    x_arr = np.empty((trials, n), dtype=np.uint8)
    d_arr = np.empty((trials, n), dtype=np.float64)
    cdef cnp.uint8_t[:, ::1] U = u_arr
    cdef cnp.uint8_t[:, ::1] X = x_arr
    cdef double[:, ::1] D = d_arr
    cdef double* scratch = <double*> malloc(max(n, 1) * sizeof(double))
    if scratch == NULL:
        raise MemoryError()
    try:
        with nogil:
            for t in range(trials):
                _decode(&L[t, 0], n, &fz[0], &fv[0], &U[t, 0], &X[t, 0], &D[t, 0], scratch)
    finally:
        free(scratch)
    return u_arr, x_arr, d_arr
