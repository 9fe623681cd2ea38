# cython: language_level=3
"""Compiled bitmask kernels.

Same contracts and enumeration orders as ``_pykernels``; see there for the
canonical definitions.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

ctypedef long long i64


def value_table(valuations, alphas, rates, double cost):
    cdef const double[::1] u = np.ascontiguousarray(valuations, dtype=np.float64)
    cdef const double[::1] al = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double[::1] r = np.ascontiguousarray(rates, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0]
    cdef i64 size = (<i64>1) << n
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(size)
    cdef double[::1] v = out
    cdef double[::1] su = np.zeros(size)
    cdef double[::1] sa = np.zeros(size)
    cdef double[::1] rmin = np.full(size, INFINITY)
    cdef i64 lo, m, base
    cdef Py_ssize_t i
    for i in range(n):
        lo = (<i64>1) << i
        for m in range(lo):
            base = lo + m
            su[base] = su[m] + u[i]
            sa[base] = sa[m] + al[i]
            rmin[base] = rmin[m] if rmin[m] < r[i] else r[i]
    for m in range(1, size):
        v[m] = su[m] - (sa[m] + cost) / rmin[m]
    return out


def subset_sums(x):
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0]
    cdef i64 size = (<i64>1) << n
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(size)
    cdef double[::1] o = out
    cdef i64 lo, m
    cdef Py_ssize_t i
    for i in range(n):
        lo = (<i64>1) << i
        for m in range(lo):
            o[lo + m] = o[m] + xs[i]
    return out


def first_convexity_violation(v_in, int n, double tol):
    cdef const double[::1] v = np.ascontiguousarray(v_in, dtype=np.float64)
    cdef i64 size = (<i64>1) << n
    cdef i64 s, si, sj
    cdef int i, j
    for s in range(size):
        for i in range(n):
            if s & ((<i64>1) << i):
                continue
            si = s | ((<i64>1) << i)
            for j in range(i + 1, n):
                if s & ((<i64>1) << j):
                    continue
                sj = s | ((<i64>1) << j)
                if v[si] + v[sj] > v[si | sj] + v[s] + tol:
                    return (int(s), i, j)
    return None


def first_split_violation(v_in, blocks, double tol):
    cdef const double[::1] v = np.ascontiguousarray(v_in, dtype=np.float64)
    cdef i64 blk, t, low, rest, sub, a
    for pyblk in blocks:
        blk = pyblk
        t = 0
        while True:
            if t & (t - 1):
                low = t & -t
                rest = t ^ low
                sub = 0
                while sub != rest:
                    a = low | sub
                    if v[a] + v[t ^ a] > v[t] + tol:
                        return (int(t), int(a))
                    sub = (sub - rest) & rest
            if t == blk:
                break
            t = (t - blk) & blk
    return None


def first_incompatible_violation(v_in, blocks, int n, double tol):
    cdef const double[::1] v = np.ascontiguousarray(v_in, dtype=np.float64)
    cdef const i64[::1] bl = np.ascontiguousarray(blocks, dtype=np.int64)
    cdef Py_ssize_t nb = bl.shape[0], k
    cdef i64 size = (<i64>1) << n
    cdef i64 s, part
    cdef int touched
    cdef double split
    for s in range(3, size):
        touched = 0
        split = 0.0
        for k in range(nb):
            part = s & bl[k]
            if part:
                touched += 1
                split += v[part]
        if touched >= 2 and split + tol < v[s]:
            return (int(s), float(split))
    return None


def best_partition(v_in, int n):
    cdef const double[::1] v = np.ascontiguousarray(v_in, dtype=np.float64)
    cdef cnp.ndarray[i64, ndim=1] lab_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] best_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] kmax_arr = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] bm_arr = np.zeros(n + 1, dtype=np.int64)
    cdef i64[::1] lab = lab_arr
    cdef i64[::1] best = best_arr
    cdef i64[::1] kmax = kmax_arr   # kmax[i] = number of blocks used by users < i
    cdef i64[::1] bm = bm_arr
    cdef double best_val = -INFINITY, total
    cdef int i, b, k
    if n == 0:
        return best_arr, 0.0
    # Iterative RGS walk in lexicographic order; user 0 is always in block 0.
    lab[0] = 0
    bm[0] = 1
    kmax[1] = 1
    i = 1
    while True:
        if i == n:
            k = kmax[n]
            total = 0.0
            for b in range(k):
                total += v[bm[b]]
            if total > best_val:
                best_val = total
                best[:] = lab
            i -= 1
            # advance position i (backtrack as needed)
            while i >= 1:
                bm[lab[i]] ^= ((<i64>1) << i)
                if lab[i] < kmax[i]:
                    lab[i] += 1
                    bm[lab[i]] |= ((<i64>1) << i)
                    kmax[i + 1] = kmax[i] + 1 if lab[i] == kmax[i] else kmax[i]
                    i += 1
                    break
                i -= 1
            if i < 1:
                break
        else:
            lab[i] = 0
            bm[0] |= ((<i64>1) << i)
            kmax[i + 1] = kmax[i]
            i += 1
    return best_arr, float(best_val)
