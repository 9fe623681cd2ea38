"""Seeded scenario families shared by the test modules.

Each family is tuned so that one closed-form condition fires often, which is
what makes a soundness fuzz informative.
"""

from __future__ import annotations

import numpy as np

from mcastgame.scenario import Partition, Scenario, derive_constants


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_scenario(seed: int, n: int, equal_rx: bool = False, rate_range=(5.0, 250.0)) -> Scenario:
    g = _rng(seed)
    rates = np.round(g.uniform(*rate_range, n), 2)
    rx = np.full(n, round(float(g.uniform(0.2, 0.4)), 3)) if equal_rx else np.round(g.uniform(0.2, 0.4, n), 3)
    return Scenario(
        n=n,
        rates=rates,
        valuations=np.round(g.uniform(90, 100, n), 2),
        rx_powers=rx,
        tx_power=float(g.uniform(0.5, 4.0)),
        file_size=float(g.uniform(2.0, 15.0)),
    )


def near_equal_rates(seed: int, n: int) -> Scenario:
    """Rates within a few percent of each other: the rate-ratio condition
    for a non-empty core is frequently met."""
    g = _rng(seed)
    base = g.uniform(30, 200)
    spread = g.uniform(0.0, 0.02)
    s = random_scenario(seed, n)
    return s.replace(rates=np.round(base * (1 + spread * g.random(n)), 4), rx_powers=np.round(g.uniform(0.29, 0.31, n), 4))


def slow_outlier(seed: int, n: int) -> Scenario:
    """Equal receive powers and one user much slower than the rest."""
    g = _rng(seed)
    s = random_scenario(seed, n, equal_rx=True)
    rates = g.uniform(40, 250, n)
    rates[g.integers(n)] = g.uniform(2, 60)
    return s.replace(rates=np.round(rates, 3))


def banded(seed: int, n: int) -> tuple[Scenario, Partition]:
    """Consecutive rate bands sampled around both thresholds of the banded
    Dc condition: band spreads up to the allowed maximum and gaps (measured
    from each band's slowest user) between 0.9x and 1.4x the required
    separation."""
    g = _rng(seed)
    s = random_scenario(seed, n)
    k = derive_constants(s)
    amin, amax, c = k.alpha_min, k.alpha_max, k.cost
    gap_needed = (amin + c) / amin
    sizes = []
    left = n
    while left:
        size = int(g.integers(1, min(3, left) + 1))
        sizes.append(size)
        left -= size
    rates, blocks, start, lo = [], [], 0, g.uniform(5, 20)
    for size in sizes:
        spread_max = max(1.0, 2 * (amin + c) / (amax * size + c))
        hi = lo * g.uniform(1.0, spread_max) if size > 1 else lo
        band = np.sort(np.concatenate([[lo, hi], g.uniform(lo, hi, size - 2)]))[:size] if size > 1 else np.array([lo])
        if size > 1:
            band[-1] = hi
        rates.extend(band)
        blocks.append(list(range(start, start + size)))
        start += size
        lo = band[0] * gap_needed * g.uniform(0.9, 1.4)
    s = s.replace(rates=np.round(rates, 6))
    return s, Partition.from_lists(n, blocks)


def spread_singletons(seed: int, n: int) -> Scenario:
    """Geometrically spread rates so singleton Dc-stability is common."""
    g = _rng(seed)
    s = random_scenario(seed, n)
    ratios = g.uniform(2.0, 6.0, n - 1)
    rates = 2.0 * np.concatenate([[1.0], np.cumprod(ratios)])
    return s.replace(rates=np.round(g.permutation(rates), 6))


def random_system(seed: int):
    """Small integer linear system ``(n_vars, eq_rows, ge_rows, lower_bounds)``.

    Half of the seeds build the right-hand sides around a known point, so
    feasible and infeasible systems both appear in bulk; some of those are
    tight (zero slack), which exercises degenerate pivots.
    """
    g = _rng(seed)
    n = int(g.integers(1, 7))
    m = int(g.integers(1, 13))
    n_eq = int(g.integers(0, min(3, m) + 1))
    A = g.integers(-4, 5, size=(m, n))
    anchored = seed % 2 == 0
    if anchored:
        x0 = g.integers(-5, 6, n)
        b = A @ x0 - np.where(np.arange(m) < n_eq, 0, g.integers(0, 3, m))
        b = b + (g.random(m) < 0.15) * g.integers(1, 4, m)  # occasionally break it
    else:
        b = g.integers(-8, 9, m)
    eq = [(A[i].tolist(), int(b[i])) for i in range(n_eq)]
    ge = [(A[i].tolist(), int(b[i])) for i in range(n_eq, m)]
    lb = g.integers(-6, 3, n).tolist() if g.random() < 0.4 else None
    return n, eq, ge, lb
