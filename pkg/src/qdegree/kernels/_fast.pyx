# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot array kernels.

Same contracts as ``qdegree.kernels._ref``; the tight loops run in C.
"""

import numpy as np

BACKEND = "cython"


cdef void _fwht_f64(double[::1] a) noexcept:
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef double x, y
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h *= 2


cdef void _fwht_i64(long long[::1] a) noexcept:
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef long long x, y
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h *= 2


cdef void _fwht_c128(double complex[::1] a) noexcept:
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef double complex x, y
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h *= 2


def fwht_inplace(a):
    """In-place unnormalized Walsh-Hadamard transform (see _ref for the contract)."""
    if a.dtype == np.float64:
        _fwht_f64(a)
    elif a.dtype == np.int64:
        _fwht_i64(a)
    elif a.dtype == np.complex128:
        _fwht_c128(a)
    else:
        raise TypeError(f"unsupported dtype for fwht_inplace: {a.dtype}")


cdef void _zeta_f64(double[::1] a, int sign) noexcept:
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                a[j + h] += sign * a[j]
        h *= 2


cdef void _zeta_i64(long long[::1] a, int sign) noexcept:
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                a[j + h] += sign * a[j]
        h *= 2


def zeta_inplace(a):
    """In-place subset-sum transform (see _ref for the contract)."""
    if a.dtype == np.float64:
        _zeta_f64(a, 1)
    elif a.dtype == np.int64:
        _zeta_i64(a, 1)
    else:
        raise TypeError(f"unsupported dtype for zeta_inplace: {a.dtype}")


def mobius_inplace(a):
    """Inverse of zeta_inplace (see _ref for the contract)."""
    if a.dtype == np.float64:
        _zeta_f64(a, -1)
    elif a.dtype == np.int64:
        _zeta_i64(a, -1)
    else:
        raise TypeError(f"unsupported dtype for mobius_inplace: {a.dtype}")


def influence_counts(values, n):
    """Per-variable flip-disagreement counts (see _ref for the contract)."""
    cdef const unsigned char[::1] v = np.ascontiguousarray(values, dtype=np.uint8)
    cdef Py_ssize_t size = v.shape[0]
    cdef Py_ssize_t nn = n
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t i, r, bit
    cdef long long cnt
    for i in range(nn):
        bit = 1 << (nn - 1 - i)
        cnt = 0
        for r in range(size):
            if v[r] != v[r ^ bit]:
                cnt += 1
        o[i] = cnt
    return out


def sensitivity_profile(values, n):
    """Per-row count of output-changing flips (see _ref for the contract)."""
    cdef const unsigned char[::1] v = np.ascontiguousarray(values, dtype=np.uint8)
    cdef Py_ssize_t size = v.shape[0]
    cdef Py_ssize_t nn = n
    out = np.zeros(size, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t b, r
    for b in range(nn):
        for r in range(size):
            if v[r] != v[r ^ (1 << b)]:
                o[r] += 1
    return out


def batch_analyze(n):
    """Degree/sensitivity/influence sweep over all functions on n <= 4 bits.

    See _ref.batch_analyze for the exact contract.
    """
    if n > 4:
        raise ValueError(f"batch_analyze supports n <= 4, got n={n}")
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t size = 1 << nn
    cdef unsigned long long count = 1ULL << size
    deg_arr = np.empty(count, dtype=np.int64)
    sens_arr = np.empty(count, dtype=np.int64)
    inf_arr = np.empty((count, n), dtype=np.int64)
    cdef long long[::1] deg = deg_arr
    cdef long long[::1] sens = sens_arr
    cdef long long[:, ::1] inf = inf_arr

    cdef int vals[16]
    cdef int coeff[16]
    cdef int popcnt[16]
    cdef int scount[16]
    cdef unsigned long long code
    cdef Py_ssize_t r, i, j, h, bit
    cdef int smax, d, cnt, diff

    for r in range(size):
        popcnt[r] = bin(r).count("1")

    for code in range(count):
        for r in range(size):
            vals[r] = (code >> r) & 1
            scount[r] = 0
        # influences (variable i is bit nn-i of the row index); each
        # pairwise comparison simultaneously feeds the sensitivity profile
        for i in range(nn):
            bit = 1 << (nn - 1 - i)
            cnt = 0
            for r in range(size):
                if r & bit:
                    continue
                diff = vals[r] != vals[r | bit]
                if diff:
                    cnt += 2
                    scount[r] += 1
                    scount[r | bit] += 1
            inf[code, i] = cnt
        smax = 0
        for r in range(size):
            if scount[r] > smax:
                smax = scount[r]
        sens[code] = smax
        # degree via integer Moebius transform of the 0/1 values
        for r in range(size):
            coeff[r] = vals[r]
        h = 1
        while h < size:
            for i in range(0, size, 2 * h):
                for j in range(i, i + h):
                    coeff[j + h] -= coeff[j]
            h *= 2
        d = 0
        for r in range(size):
            if coeff[r] != 0 and popcnt[r] > d:
                d = popcnt[r]
        deg[code] = d

    return deg_arr, sens_arr, inf_arr
