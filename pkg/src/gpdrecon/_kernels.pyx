# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.  Semantics match ``_fallback`` exactly."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def first_nonassociative(const int[:, ::1] table):
    """First ``(a, b, c)`` with ``(ab)c != a(bc)``; ``-1`` marks an undefined product."""
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t a, b, c
    cdef int ab, bc, lhs, rhs
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                bc = table[b, c]
                lhs = table[ab, c] if ab >= 0 else -1
                rhs = table[a, bc] if bc >= 0 else -1
                if lhs != rhs:
                    return (a, b, c)
    return None


cdef inline void _gr_mul(int[::1] x, int[::1] y, int[::1] out, const int[:, ::1] gtab,
                         const int[:, ::1] add_t, const int[:, ::1] mul_t) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef int z
    for i in range(n):
        out[i] = 0
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if y[j] == 0:
                continue
            z = gtab[i, j]
            out[z] = add_t[out[z], mul_t[x[i], y[j]]]


def group_ring_units(const int[:, ::1] add_t, const int[:, ::1] mul_t,
                     const int[:, ::1] gtab, int identity, int one, long long total):
    cdef Py_ssize_t n = gtab.shape[0]
    cdef int rsize = add_t.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] inv = np.full(total, -1, dtype=np.int64)
    cdef int[::1] a = np.zeros(n, dtype=np.int32)
    cdef int[::1] x = np.zeros(n, dtype=np.int32)
    cdef int[::1] prev = np.zeros(n, dtype=np.int32)
    cdef int[::1] tmp = np.zeros(n, dtype=np.int32)
    cdef int[::1] sq = np.zeros(n, dtype=np.int32)
    cdef long long idx, rem, enc
    cdef Py_ssize_t i
    cdef bint is_one, is_idem
    with nogil:
        for idx in range(total):
            rem = idx
            for i in range(n):
                a[i] = rem % rsize
                rem = rem // rsize
            # prev = a^0 = 1, x = a^1
            for i in range(n):
                prev[i] = 0
                x[i] = a[i]
            prev[identity] = one
            while True:
                is_one = True
                for i in range(n):
                    if x[i] != (one if i == identity else 0):
                        is_one = False
                        break
                if is_one:
                    enc = 0
                    for i in range(n - 1, -1, -1):
                        enc = enc * rsize + prev[i]
                    inv[idx] = enc
                    break
                _gr_mul(x, x, sq, gtab, add_t, mul_t)
                is_idem = True
                for i in range(n):
                    if sq[i] != x[i]:
                        is_idem = False
                        break
                if is_idem:
                    break
                for i in range(n):
                    prev[i] = x[i]
                _gr_mul(prev, a, tmp, gtab, add_t, mul_t)
                for i in range(n):
                    x[i] = tmp[i]
    return inv


def sc_mul_pairs(const int[:, ::1] A, const int[:, ::1] B, const long long[::1] ptr,
                 const int[::1] ks, const int[::1] cs,
                 const int[:, ::1] add_t, const int[:, ::1] mul_t):
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t dim = A.shape[1]
    cdef cnp.ndarray[cnp.int32_t, ndim=2] out_arr = np.zeros((m, dim), dtype=np.int32)
    cdef int[:, ::1] out = out_arr
    cdef Py_ssize_t r, i, j
    cdef long long t, pij
    cdef int ab, k
    with nogil:
        for r in range(m):
            for i in range(dim):
                if A[r, i] == 0:
                    continue
                for j in range(dim):
                    if B[r, j] == 0:
                        continue
                    ab = mul_t[A[r, i], B[r, j]]
                    if ab == 0:
                        continue
                    pij = i * dim + j
                    for t in range(ptr[pij], ptr[pij + 1]):
                        k = ks[t]
                        out[r, k] = add_t[out[r, k], mul_t[ab, cs[t]]]
    return out_arr
