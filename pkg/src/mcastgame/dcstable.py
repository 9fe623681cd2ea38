"""Dc-stability of partitions.

A partition ``P`` is Dc-stable when re-grouping the users of any collection
``S`` along ``P`` never loses value: ``v(S[P]) >= v(S)``.  ``is_dc_stable``
uses the two-condition characterisation (superadditivity inside blocks,
splitting dominance across blocks); ``is_dc_stable_by_definition`` checks the
definition over every collection and is kept for cross-checks on small games.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels, limits
from .core import TheoremApplicability
from .scenario import Collection, Partition, Scenario, derive_constants, members, popcount
from .partitions import set_partitions
from .value import coalition_value, collection_value, table_scale, value_table

COMPATIBLE_SPLIT = "CompatibleSplit"
INCOMPATIBLE_COALITION = "IncompatibleCoalition"
COLLECTION = "Collection"


@dataclass(frozen=True)
class DcCounterexample:
    kind: str
    witness: Collection | int
    lhs: float
    rhs: float


@dataclass(frozen=True)
class DcVerdict:
    """``stable`` plus, when false, the first violated inequality
    ``lhs >= rhs``."""

    stable: bool
    counterexample: DcCounterexample | None = None


@dataclass(frozen=True)
class BestPartition:
    partition: Partition
    value: float


def restrict_collection(col: Collection, p: Partition) -> Collection:
    """``S[P]``: the users of ``col`` regrouped along the blocks of ``p``."""
    if col.n != p.n:
        raise ValueError("collection and partition are over different user sets")
    u = col.union
    return Collection(col.n, tuple(u & b for b in p.blocks if u & b))


def is_dc_stable(s: Scenario, p: Partition, tol: float = 1e-9, cap: int | None = None,
                 block_cap: int | None = None) -> DcVerdict:
    """Exhaustive Dc-stability check.

    Inside each block only two-way splits are tested: ``v(T) >= v(A) + v(B)``
    for every ``T`` and split ``{A, B}`` implies the inequality for every
    finer split of ``T`` by induction.  Tolerance is relative to the largest
    ``|v|`` of the game.
    """
    if p.n != s.n:
        raise ValueError("partition size does not match scenario")
    limits.check("dc", s.n, cap, "is_dc_stable")
    limits.check("block", max(popcount(b) for b in p.blocks), block_cap, "is_dc_stable block size")
    v = value_table(s)
    t = tol * table_scale(v)
    hit = kernels.first_split_violation(v, p.blocks, t)
    if hit is not None:
        whole, a = hit
        part = Collection(s.n, (a, whole ^ a))
        return DcVerdict(False, DcCounterexample(COMPATIBLE_SPLIT, part, float(v[whole]), float(v[a] + v[whole ^ a])))
    hit = kernels.first_incompatible_violation(v, np.asarray(p.blocks, dtype=np.int64), s.n, t)
    if hit is not None:
        mask, split = hit
        return DcVerdict(False, DcCounterexample(INCOMPATIBLE_COALITION, mask, float(split), float(v[mask])))
    return DcVerdict(True)


def is_dc_stable_by_definition(s: Scenario, p: Partition, tol: float = 1e-9, cap: int = 7) -> DcVerdict:
    """Check ``v(S[P]) >= v(S)`` for every collection ``S``.

    Enumerates every non-empty user subset and every partition of it
    (``Bell(n+1) - 1`` collections), evaluating ``v`` directly.
    """
    limits.check("dc", s.n, cap, "is_dc_stable_by_definition")
    scale = max([1.0] + [abs(coalition_value(s, m)) for m in range(1, 1 << s.n)])
    t = tol * scale
    for union in range(1, 1 << s.n):
        regrouped = collection_value(s, restrict_collection(Collection(s.n, (union,)), p))
        for blocks in set_partitions(members(union)):
            col = Collection.from_lists(s.n, blocks)
            direct = collection_value(s, col)
            if regrouped + t < direct:
                return DcVerdict(False, DcCounterexample(COLLECTION, col, regrouped, direct))
    return DcVerdict(True)


def best_partition_bruteforce(s: Scenario, cap: int | None = None) -> BestPartition:
    """Welfare-maximising partition by exhaustive enumeration.

    Ties go to the first partition in restricted-growth-string order.
    """
    limits.check("bell", s.n, cap, "best_partition_bruteforce")
    labels, value = kernels.best_partition(value_table(s), s.n)
    return BestPartition(Partition.from_labels(list(labels)), float(value))


# --------------------------------------------------------------------------
# Closed-form sufficient conditions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BandStructure:
    """Blocks sorted by minimum rate, with their rate extremes."""

    order: tuple[int, ...]  # block masks, ascending by minimum rate
    r_min: tuple[float, ...]
    r_max: tuple[float, ...]
    sizes: tuple[int, ...]
    alpha_min: float
    alpha_max: float
    ordered: bool = field(default=True)

    @classmethod
    def of(cls, s: Scenario, p: Partition) -> BandStructure:
        stats = []
        for b in p.blocks:
            rs = [s.rates[i] for i in members(b)]
            stats.append((min(rs), max(rs), (b & -b).bit_length(), b, len(rs)))
        stats.sort()
        r_min = tuple(x[0] for x in stats)
        r_max = tuple(x[1] for x in stats)
        ordered = all(r_max[i] <= r_min[i + 1] for i in range(len(stats) - 1))
        k = derive_constants(s)
        return cls(tuple(x[3] for x in stats), r_min, r_max, tuple(x[4] for x in stats), k.alpha_min, k.alpha_max, ordered)


def thm_banded_dc_sufficient(s: Scenario, p: Partition, gap_reference: str = "min") -> TheoremApplicability:
    """Dc-stability from well separated, internally tight rate bands.

    Gap family: ``R_{i+1,min} / R_{i,ref} >= (alpha_min + beta + gamma) / alpha_min``.
    Spread family: ``R_{j,max} / R_{j,min} <= 2 (alpha_min + beta + gamma) / (alpha_max |P_j| + beta + gamma)``.

    ``gap_reference="min"`` divides by each band's minimum rate, as the
    condition is usually stated.  That version is not sufficient on its own
    (a fast member of band ``i`` can profitably join the slowest member of
    band ``i+1``); ``gap_reference="max"`` divides by the band's maximum rate,
    which is what the cross-band argument actually needs.

    The binding inequality (smallest margin) is reported as ``lhs``/``rhs``.
    """
    if gap_reference not in ("min", "max"):
        raise ValueError("gap_reference must be 'min' or 'max'")
    name = "banded_dc" if gap_reference == "min" else "banded_dc_strict"
    bands = BandStructure.of(s, p)
    if not bands.ordered:
        return TheoremApplicability(name, False, None, relation=">=", note="rate bands overlap")
    c = derive_constants(s).cost
    amin, amax = bands.alpha_min, bands.alpha_max
    gap_rhs = (amin + c) / amin
    denom = bands.r_min if gap_reference == "min" else bands.r_max
    gaps = []
    for i in range(len(bands.order) - 1):
        lhs = bands.r_min[i + 1] / denom[i]
        gaps.append({"pair": [i, i + 1], "lhs": lhs, "rhs": gap_rhs, "ok": lhs >= gap_rhs})
    spreads = []
    for j, size in enumerate(bands.sizes):
        lhs = bands.r_max[j] / bands.r_min[j]
        rhs = 2 * (amin + c) / (amax * size + c)
        spreads.append({"block": j, "lhs": lhs, "rhs": rhs, "ok": lhs <= rhs})
    holds = all(g["ok"] for g in gaps) and all(sp["ok"] for sp in spreads)
    # binding inequality: smallest signed margin
    cands = [(g["lhs"] - g["rhs"], g["lhs"], g["rhs"], ">=") for g in gaps]
    cands += [(sp["rhs"] - sp["lhs"], sp["lhs"], sp["rhs"], "<=") for sp in spreads]
    _, lhs, rhs, rel = min(cands)
    return TheoremApplicability(
        name, True, holds, lhs, rhs, rel,
        diagnostics={
            "blocks": [members(b) for b in bands.order],
            "gaps": gaps,
            "spreads": spreads,
            "alpha_min": amin,
            "alpha_max": amax,
        },
    )


def thm_singleton_dc_sufficient(s: Scenario) -> TheoremApplicability:
    """All-singletons partition is Dc-stable when consecutive rates (in
    ascending order) grow by at least ``(alpha + beta + gamma) / alpha`` of
    the faster user."""
    k = derive_constants(s)
    order = sorted(range(s.n), key=lambda i: (s.rates[i], i))
    steps = []
    for lo, hi in zip(order, order[1:]):
        lhs = s.rates[hi] / s.rates[lo]
        rhs = (k.alphas[hi] + k.cost) / k.alphas[hi]
        steps.append({"users": [lo, hi], "lhs": lhs, "rhs": rhs, "ok": lhs >= rhs})
    if not steps:
        return TheoremApplicability("singleton_dc", True, True, relation=">=", note="vacuous: single user")
    worst = min(steps, key=lambda st: st["lhs"] - st["rhs"])
    return TheoremApplicability(
        "singleton_dc", True, all(st["ok"] for st in steps), worst["lhs"], worst["rhs"], ">=",
        diagnostics={"order": order, "steps": steps},
    )
