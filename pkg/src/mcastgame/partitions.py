"""Set-partition enumeration by restricted growth strings."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from functools import lru_cache


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    """Number of set partitions of an ``n``-element set."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def restricted_growth_strings(n: int) -> Iterator[list[int]]:
    """Yield every RGS of length ``n`` in lexicographic order.

    ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``; each string labels one set
    partition, with no duplicates.
    """
    if n == 0:
        yield []
        return
    a = [0] * n
    top = [0] * n  # top[i] = max(a[:i+1])
    while True:
        yield a[:]
        i = n - 1
        while i > 0 and a[i] > top[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        top[i] = max(top[i - 1], a[i])
        for k in range(i + 1, n):
            a[k] = 0
            top[k] = top[i]


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All partitions of ``items`` as lists of blocks."""
    for rgs in restricted_growth_strings(len(items)):
        blocks: list[list] = [[] for _ in range(max(rgs, default=-1) + 1)]
        for item, lab in zip(items, rgs):
            blocks[lab].append(item)
        yield blocks
