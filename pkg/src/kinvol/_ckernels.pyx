# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see _pykernels for the reference implementations."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def commutator_images(L, alpha, R):
    """Rows ``vec(L (X alpha - alpha X) R)`` for X over the so(n,1) basis."""
    cdef double[:, ::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    cdef double[:, ::1] Rv = np.ascontiguousarray(R, dtype=np.float64)
    al = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef double[:, ::1] Av = np.ascontiguousarray(al @ np.asarray(Rv))
    cdef double[:, ::1] Bv = np.ascontiguousarray(np.asarray(Lv) @ al)
    cdef Py_ssize_t N = al.shape[0]
    cdef Py_ssize_t n = N - 1
    cdef Py_ssize_t d = n * (n + 1) // 2
    out = np.empty((d, N * N), dtype=np.float64)
    cdef double[:, ::1] O = out
    cdef Py_ssize_t t = 0, a, b
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            _fill(O, t, Lv, Av, Bv, Rv, a, b, 1.0, N)
            t += 1
    for b in range(1, n + 1):
        _fill(O, t, Lv, Av, Bv, Rv, 0, b, -1.0, N)
        t += 1
    return out


cdef inline void _fill(double[:, ::1] O, Py_ssize_t t, double[:, ::1] L,
                       double[:, ::1] A, double[:, ::1] B, double[:, ::1] R,
                       Py_ssize_t a, Py_ssize_t b, double s, Py_ssize_t N) noexcept nogil:
    # X = E_ab - s E_ba;  L X A - B X R
    cdef Py_ssize_t i, j
    cdef double la, lb, ba, bb
    for i in range(N):
        la = L[i, a]
        lb = L[i, b]
        ba = B[i, a]
        bb = B[i, b]
        for j in range(N):
            O[t, i * N + j] = (la * A[b, j] - s * lb * A[a, j]
                               - ba * R[b, j] + s * bb * R[a, j])


cdef inline long _count(long n) noexcept nogil:
    cdef long k, c = 0
    cdef long target = n * (n + 1)
    for k in range(1, n):
        if 4 * k * (n - k + 1) >= target:
            c += 1
    return c


def count_length_two(long n):
    """Number of k in 1..n-1 with n(n+1) <= 4k(n-k+1)."""
    return _count(n)


def count_length_two_table(long n_max):
    out = np.zeros(n_max + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef long n
    with nogil:
        for n in range(2, n_max + 1):
            o[n] = _count(n)
    return out
