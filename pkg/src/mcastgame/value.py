"""Characteristic function of the multicast game.

A coalition ``S`` is served at its bottleneck rate ``R_S = min_{i in S} R_i``
and pays every cost term over the download time ``X / R_S``::

    v(S) = sum_S U_i - sum_S alpha_i / R_S - (beta + gamma) / R_S
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from collections.abc import Iterable

import numpy as np

from . import kernels
from .scenario import Scenario, derive_constants, members


def coalition_rate(s: Scenario, c: int) -> float:
    if c <= 0:
        raise ValueError("coalition must be non-empty")
    return min(s.rates[i] for i in members(c))


def coalition_value(s: Scenario, c: int) -> float:
    """``v(c)`` in the alpha/beta/gamma form."""
    if c <= 0:
        raise ValueError("coalition must be non-empty")
    k = derive_constants(s)
    idx = members(c)
    r = min(s.rates[i] for i in idx)
    return sum(s.valuations[i] for i in idx) - sum(k.alphas[i] for i in idx) / r - k.cost / r


def coalition_value_raw(s: Scenario, c: int) -> float:
    """``v(c)`` from powers and unit costs directly, without derived constants."""
    idx = members(c)
    r = min(s.rates[i] for i in idx)
    x = s.file_size
    return (
        sum(s.valuations[i] for i in idx)
        - s.a * sum(s.rx_powers[i] * x / r for i in idx)
        - s.b * s.tx_power * x / r
        - s.w * x / r
    )


def coalition_value_exact(s: Scenario, c: int) -> Fraction:
    """``v(c)`` in exact rational arithmetic over the (binary) float inputs."""
    F = Fraction
    idx = members(c)
    r = min(F(s.rates[i]) for i in idx)
    x = F(s.file_size)
    alpha = sum(F(s.a) * F(s.rx_powers[i]) * x for i in idx)
    return sum(F(s.valuations[i]) for i in idx) - alpha / r - (F(s.b) * F(s.tx_power) * x + F(s.w) * x) / r


def collection_value(s: Scenario, parts: Iterable[int]) -> float:
    return sum(coalition_value(s, p) for p in parts)


@lru_cache(maxsize=64)
def _table(s: Scenario) -> np.ndarray:
    k = derive_constants(s)
    v = kernels.value_table(s.valuations, k.alphas, s.rates, k.cost)
    v.setflags(write=False)
    return v


def value_table(s: Scenario) -> np.ndarray:
    """Read-only array of ``v`` over all ``2**n`` masks (``v[0] = 0``).

    Memoised per scenario; intended for ``n`` up to about 24.
    """
    return _table(s)


def table_scale(v: np.ndarray) -> float:
    """Magnitude used to turn relative tolerances into absolute ones."""
    return max(1.0, float(np.max(np.abs(v))))
