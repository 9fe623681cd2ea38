"""Reference kernels in numpy / pure Python.

Each function defines the canonical enumeration order that the compiled
kernels must reproduce exactly (first violation found, tie-breaks).
"""

from __future__ import annotations

import numpy as np


def value_table(valuations, alphas, rates, cost):
    """``v[mask]`` for every mask over ``n`` users, with ``v[0] = 0``."""
    u = np.asarray(valuations, dtype=np.float64)
    al = np.asarray(alphas, dtype=np.float64)
    r = np.asarray(rates, dtype=np.float64)
    n = len(u)
    size = 1 << n
    su = np.zeros(size)
    sa = np.zeros(size)
    rmin = np.full(size, np.inf)
    for i in range(n):
        lo, hi = 1 << i, 1 << (i + 1)
        su[lo:hi] = su[:lo] + u[i]
        sa[lo:hi] = sa[:lo] + al[i]
        rmin[lo:hi] = np.minimum(rmin[:lo], r[i])
    v = np.zeros(size)
    v[1:] = su[1:] - (sa[1:] + cost) / rmin[1:]
    return v


def subset_sums(x):
    """``out[mask] = sum(x[i] for i in mask)``."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(1 << len(x))
    for i, xi in enumerate(x):
        lo = 1 << i
        out[lo:2 * lo] = out[:lo] + xi
    return out


def first_convexity_violation(v, n, tol):
    """First ``(S, i, j)`` with ``v[S|i] + v[S|j] > v[S|i|j] + v[S] + tol``.

    Order: ``S`` ascending, then ``i`` ascending, then ``j > i``; ``i, j`` not
    in ``S``.  Returns ``None`` if the local supermodularity test passes.
    """
    v = np.asarray(v)
    masks = np.arange(1 << n, dtype=np.int64)
    best = None
    for i in range(n):
        bi = 1 << i
        for j in range(i + 1, n):
            bj = 1 << j
            s = masks[(masks & (bi | bj)) == 0]
            bad = v[s | bi] + v[s | bj] > v[s | bi | bj] + v[s] + tol
            if bad.any():
                cand = (int(s[np.argmax(bad)]), i, j)
                if best is None or cand < best:
                    best = cand
    return best


def _submasks_ascending(m):
    sub = 0
    while True:
        yield sub
        if sub == m:
            return
        sub = (sub - m) & m


def first_split_violation(v, blocks, tol):
    """First ``(T, A)`` with ``v[A] + v[T^A] > v[T] + tol`` inside some block.

    Blocks in the given order; ``T`` over submasks of the block in ascending
    order with at least two members; ``A`` over proper submasks of ``T`` that
    contain the lowest member of ``T``, ascending.
    """
    v = np.asarray(v)
    for blk in blocks:
        for t in _submasks_ascending(int(blk)):
            if t & (t - 1) == 0:
                continue
            low = t & -t
            rest = t ^ low
            subs = np.fromiter(_submasks_ascending(rest), dtype=np.int64)
            a = low | subs[:-1]  # drop A == T
            bad = v[a] + v[t ^ a] > v[t] + tol
            if bad.any():
                return t, int(a[np.argmax(bad)])
    return None


def first_incompatible_violation(v, blocks, n, tol):
    """First ``S`` (ascending) meeting two or more blocks with
    ``sum_b v[S & P_b] + tol < v[S]``.  Returns ``(S, split_value)``."""
    v = np.asarray(v)
    masks = np.arange(1 << n, dtype=np.int64)
    inside = np.zeros(len(masks), dtype=bool)
    split = np.zeros(len(masks))
    for blk in blocks:
        blk = int(blk)
        inside |= (masks & ~blk) == 0
        split += v[masks & blk]
    bad = (~inside) & (split + tol < v)
    if not bad.any():
        return None
    s = int(np.argmax(bad))
    return s, float(split[s])


def best_partition(v, n):
    """Restricted-growth-string enumeration of all set partitions.

    Returns ``(labels, value)`` for the first partition, in lexicographic RGS
    order, attaining the maximum of ``sum(v[block])``.  Block values are
    summed in label order.
    """
    v = [float(t) for t in np.asarray(v)]
    labels = [0] * n
    block_masks = [0] * (n + 1)
    best_val = -np.inf
    best_lab = None

    def rec(i, k):
        nonlocal best_val, best_lab
        if i == n:
            total = 0.0
            for b in range(k):
                total += v[block_masks[b]]
            if total > best_val:
                best_val = total
                best_lab = labels[:]
            return
        bit = 1 << i
        for lab in range(k + 1):
            labels[i] = lab
            block_masks[lab] |= bit
            rec(i + 1, k + 1 if lab == k else k)
            block_masks[lab] ^= bit

    rec(0, 0)
    return np.asarray(best_lab, dtype=np.int64), float(best_val)
