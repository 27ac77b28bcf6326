# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts and layouts as ``_pykernels``."""

import numpy as np
from libc.stdint cimport int64_t, uint8_t


def flip_counts(const uint8_t[::1] table01, int d):
    out = np.zeros(d, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t size = (<Py_ssize_t>1) << d
    cdef Py_ssize_t x, bit
    cdef int i
    cdef int64_t cnt
    for i in range(d):
        bit = (<Py_ssize_t>1) << i
        cnt = 0
        for x in range(size):
            if not (x & bit) and table01[x] != table01[x | bit]:
                cnt += 2
        o[i] = cnt
    return out


cdef Py_ssize_t _pow3(int n):
    cdef Py_ssize_t r = 1
    for _ in range(n):
        r *= 3
    return r


def subcube_ones(const uint8_t[::1] table01, int n):
    cdef Py_ssize_t total = _pow3(n)
    out = np.zeros(total, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef int64_t[32] p3
    cdef int[32] digit
    cdef Py_ssize_t idx, binary
    cdef int i, low
    p3[0] = 1
    for i in range(1, n):
        p3[i] = p3[i - 1] * 3
    for i in range(n):
        digit[i] = 0
    for idx in range(total):
        low = -1
        binary = 0
        for i in range(n):
            if digit[i] == 2:
                if low < 0:
                    low = i
            elif digit[i] == 1:
                binary |= (<Py_ssize_t>1) << i
        if low < 0:
            o[idx] = table01[binary]
        else:
            o[idx] = o[idx - 2 * p3[low]] + o[idx - p3[low]]
        # base-3 increment
        i = 0
        while i < n:
            digit[i] += 1
            if digit[i] < 3:
                break
            digit[i] = 0
            i += 1
    return out


def opt_table(ones_in, int n, costs, int kmax, bint worst):
    cdef const int64_t[::1] ones = np.ascontiguousarray(ones_in, dtype=np.int64)
    cdef const int64_t[::1] c = np.ascontiguousarray(costs, dtype=np.int64)
    cdef Py_ssize_t total = _pow3(n)
    cdef int K = kmax + 1
    table = np.zeros((total, K), dtype=np.int64)
    cdef int64_t[:, ::1] V = table
    cdef int64_t[32] p3
    cdef int[32] digit
    cdef Py_ssize_t idx, ch0, ch1
    cdef int i, d, k, k0, k1, lo, hi
    cdef int64_t m, m0, m1, size, best, val, a, b, step
    cdef int64_t big = (<int64_t>1) << 62
    p3[0] = 1
    for i in range(1, n):
        p3[i] = p3[i - 1] * 3
    for i in range(n):
        digit[i] = 0
    for idx in range(total):
        d = 0
        for i in range(n):
            if digit[i] == 2:
                d += 1
        size = (<int64_t>1) << d
        m = ones[idx] if ones[idx] < size - ones[idx] else size - ones[idx]
        if d > 0:
            for k in range(K):
                if m <= k:
                    break
                best = big
                for i in range(n):
                    if digit[i] != 2:
                        continue
                    ch0 = idx - 2 * p3[i]
                    ch1 = idx - p3[i]
                    m0 = ones[ch0] if 2 * ones[ch0] <= size // 2 else size // 2 - ones[ch0]
                    m1 = ones[ch1] if 2 * ones[ch1] <= size // 2 else size // 2 - ones[ch1]
                    # splits giving one side more than its minority are dominated
                    lo = k - m1 if k > m1 else 0
                    hi = k if k < m0 else m0
                    if lo > hi:
                        lo = hi
                    step = c[i] if worst else c[i] << d
                    for k0 in range(lo, hi + 1):
                        k1 = k - k0
                        a = V[ch0, k0]
                        b = V[ch1, k1]
                        if worst:
                            val = step + (a if a > b else b)
                        else:
                            val = step + a + b
                        if val < best:
                            best = val
                V[idx, k] = best
        i = 0
        while i < n:
            digit[i] += 1
            if digit[i] < 3:
                break
            digit[i] = 0
            i += 1
    return table
