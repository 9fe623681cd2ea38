"""Sum-of-utilities comparisons and parameter sweeps.

Three operating modes are compared: the grand coalition, a fixed partition,
and individual (singleton) downloads.  A sweep varies one scenario parameter
over a grid while the random valuations and receive powers stay frozen, so
the curves of different modes are directly comparable.

Output tables are written as ``fig<k>_<axis>.csv`` (see ``FIGURE_NUMBERS``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .core import core_nonempty, core_screen
from .dcstable import is_dc_stable
from .errors import GridDomainError, SizeLimitError
from .scenario import BandedFormula, Partition, Scenario, generate_scenario
from .value import collection_value

DEFAULT_SEED = 7

AXES = ("min_rate", "rx_power", "tx_power", "max_rate", "num_users", "file_size")
FIGURE_NUMBERS = {"min_rate": 2, "rx_power": 3, "tx_power": 4, "max_rate": 5, "num_users": 6, "file_size": 7}

# users dropped from the front for the minimum-rate sweep (the first band)
MIN_RATE_DROP = 5
NUM_USERS_RX_POWER = 0.5


@dataclass(frozen=True)
class Mode:
    """``kind`` is ``grand``, ``partition`` or ``singletons``.

    A partition mode holds either explicit 0-based ``blocks`` or a
    ``block_size`` for consecutive blocks (which adapts to the user count).
    """

    kind: str
    blocks: tuple[tuple[int, ...], ...] | None = None
    block_size: int | None = None
    label: str | None = None

    def __post_init__(self):
        if self.kind not in ("grand", "partition", "singletons"):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.kind == "partition" and (self.blocks is None) == (self.block_size is None):
            raise ValueError("partition mode needs exactly one of blocks / block_size")

    @property
    def name(self) -> str:
        return self.label or self.kind

    def partition_for(self, n: int) -> Partition:
        if self.kind == "grand":
            return Partition.grand(n)
        if self.kind == "singletons":
            return Partition.singletons(n)
        if self.block_size is not None:
            return Partition.sequential(n, self.block_size)
        return Partition.from_lists(n, self.blocks)


GRAND = Mode("grand")
SINGLETONS = Mode("singletons")
PARTITION_5 = Mode("partition", block_size=5)
DEFAULT_MODES = (GRAND, PARTITION_5, SINGLETONS)


def mode_from_json(obj) -> Mode:
    if isinstance(obj, str):
        return {"grand": GRAND, "singletons": SINGLETONS, "partition": PARTITION_5}[obj]
    if "sequential" in obj:
        return Mode("partition", block_size=int(obj["sequential"]), label=obj.get("label"))
    blocks = tuple(tuple(int(i) - 1 for i in b) for b in obj["blocks"])  # 1-based in files
    return Mode("partition", blocks=blocks, label=obj.get("label"))


def mode_sum(s: Scenario, m: Mode) -> float:
    """Total utility of all users when they organise according to ``m``."""
    return collection_value(s, m.partition_for(s.n).blocks)


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    axis: str
    grid: tuple[float, ...]
    modes: tuple[Mode, ...] = DEFAULT_MODES
    annotate: bool = False

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}; expected one of {AXES}")
        grid = tuple(float(g) for g in self.grid)
        if not grid:
            raise GridDomainError("grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise GridDomainError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        names = [m.name for m in self.modes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate mode labels {names}")

    @property
    def filename(self) -> str:
        return f"fig{FIGURE_NUMBERS[self.axis]}_{self.axis}.csv"


@dataclass
class SweepRow:
    axis_value: float
    sums: dict[str, float]
    annotations: dict[str, str] = field(default_factory=dict)

    def top_mode(self) -> str:
        return max(self.sums, key=self.sums.get)

    def top_modes(self) -> set[str]:
        best = max(self.sums.values())
        return {k for k, v in self.sums.items() if v == best}


def scenario_at(spec: SweepSpec, value: float) -> Scenario:
    """The scenario at one grid point."""
    base = spec.base
    if spec.axis == "rx_power":
        if value <= 0:
            raise GridDomainError(f"receive power must be positive, got {value}")
        return base.replace(rx_powers=[value] * base.n)
    if spec.axis == "tx_power":
        if value <= 0:
            raise GridDomainError(f"transmit power must be positive, got {value}")
        return base.replace(tx_power=value)
    if spec.axis == "file_size":
        if value <= 0:
            raise GridDomainError(f"file size must be positive, got {value}")
        return base.replace(file_size=value)
    if spec.axis == "max_rate":
        if value <= 0:
            raise GridDomainError(f"rate must be positive, got {value}")
        rates = list(base.rates)
        rates[-1] = value
        return base.replace(rates=rates)
    if spec.axis == "min_rate":
        if base.n <= MIN_RATE_DROP + 1:
            raise GridDomainError(f"min-rate sweep needs more than {MIN_RATE_DROP + 1} users")
        sub = base.subset(range(MIN_RATE_DROP, base.n))
        ceiling = min(sub.rates[1:])
        if not 0 < value <= ceiling:
            raise GridDomainError(f"swept user must stay the slowest: need 0 < R <= {ceiling}, got {value}")
        rates = list(sub.rates)
        rates[0] = value
        return sub.replace(rates=rates)
    # num_users
    n = int(value)
    if n != value or n < 1:
        raise GridDomainError(f"user count must be a positive integer, got {value}")
    if n > base.n:
        raise GridDomainError(f"base scenario has only {base.n} users, cannot take N={n}")
    sub = base.subset(range(n))
    return sub.replace(rates=BandedFormula().rates_for(n), rx_powers=[NUM_USERS_RX_POWER] * n)


def _annotations(s: Scenario, modes: Sequence[Mode]) -> dict[str, str]:
    out = {}
    verdict, _, _ = core_screen(s)
    if verdict is None:
        try:
            verdict = core_nonempty(s).feasible
        except SizeLimitError:
            verdict = None
    out["core"] = {True: "nonempty", False: "empty", None: "inconclusive"}[verdict]
    for m in modes:
        try:
            out[f"dc_{m.name}"] = "stable" if is_dc_stable(s, m.partition_for(s.n)).stable else "unstable"
        except SizeLimitError:
            out[f"dc_{m.name}"] = "skipped"
    return out


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    rows = []
    for x in spec.grid:
        s = scenario_at(spec, x)
        sums = {m.name: mode_sum(s, m) for m in spec.modes}
        rows.append(SweepRow(x, sums, _annotations(s, spec.modes) if spec.annotate else {}))
    return rows


def find_crossovers(rows: Sequence[SweepRow]) -> list[tuple[float, float, str, str]]:
    """Adjacent grid points where the top-ranked mode changes.

    Exact ties do not count: the sets of top modes must be disjoint.
    """
    out = []
    for a, b in zip(rows, rows[1:]):
        if not a.top_modes() & b.top_modes():
            out.append((a.axis_value, b.axis_value, a.top_mode(), b.top_mode()))
    return out


def refine_crossover(spec: SweepSpec, lo: float, hi: float, first: str, second: str, tol: float = 1e-9) -> float:
    """Bisect for the axis value where modes ``first`` and ``second`` tie."""
    by_name = {m.name: m for m in spec.modes}

    def gap(x):
        s = scenario_at(spec, x)
        return mode_sum(s, by_name[first]) - mode_sum(s, by_name[second])

    g_lo = gap(lo)
    if g_lo * gap(hi) > 0:
        raise ValueError("modes do not swap order inside the bracket")
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        if g_mid == 0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------
# Reference sweeps and output
# --------------------------------------------------------------------------


def _arange(start, stop, step):
    k = int(round((stop - start) / step))
    return tuple(round(start + i * step, 10) for i in range(k + 1))


DEFAULT_GRIDS = {
    "min_rate": _arange(5, 105, 5),
    "rx_power": _arange(0.1, 1.0, 0.05),
    "tx_power": _arange(1, 40, 1),
    "max_rate": _arange(5, 300, 5),
    "num_users": _arange(1, 20, 1),
    "file_size": _arange(1, 40, 1),
}


def reference_sweeps(base: Scenario | None = None, seed: int = DEFAULT_SEED, annotate: bool = False) -> dict[str, SweepSpec]:
    """The six reference sweeps on a 20-user scenario (generated from ``seed``
    unless ``base`` is given), keyed by output file name."""
    base = generate_scenario(seed, 20) if base is None else base
    specs = [SweepSpec(base, axis, DEFAULT_GRIDS[axis], annotate=annotate) for axis in AXES]
    return {sp.filename: sp for sp in specs}


def _columns(rows: Sequence[SweepRow]) -> tuple[list[str], list[str]]:
    modes: list[str] = []
    notes: list[str] = []
    for r in rows:
        modes += [k for k in r.sums if k not in modes]
        notes += [k for k in r.annotations if k not in notes]
    return modes, notes


def _g6(x: float) -> str:
    return format(x, ".6g")


def emit_results(rows: Sequence[SweepRow], fmt: str = "csv", axis: str = "axis") -> str:
    """Render sweep rows as CSV (6 significant digits) or JSON lines."""
    modes, notes = _columns(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([axis, *modes, *notes])
        for r in rows:
            w.writerow([_g6(r.axis_value), *(_g6(r.sums[m]) for m in modes), *(r.annotations.get(k, "") for k in notes)])
        return buf.getvalue()
    if fmt == "jsonl":
        lines = []
        for r in rows:
            rec = {axis: r.axis_value, **{m: r.sums[m] for m in modes}, **{k: r.annotations.get(k) for k in notes}}
            lines.append(json.dumps(rec))
        return "".join(line + "\n" for line in lines)
    raise ValueError(f"unknown format {fmt!r}")


def parse_results(text: str, fmt: str = "csv") -> list[dict]:
    """Inverse of ``emit_results`` (numbers come back as floats)."""
    if fmt == "jsonl":
        return [json.loads(line) for line in text.splitlines() if line.strip()]
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in rec.items():
            try:
                row[k] = float(v)
            except ValueError:
                row[k] = v
        out.append(row)
    return out


def sweep_from_json(doc: dict, base: Scenario) -> SweepSpec:
    modes = tuple(mode_from_json(m) for m in doc.get("modes", ("grand", "partition", "singletons")))
    grid = doc.get("grid")
    if grid is None:
        grid = DEFAULT_GRIDS[doc["axis"]]
    return SweepSpec(base, doc["axis"], tuple(grid), modes, bool(doc.get("annotate", False)))


def is_monotone(values: Iterable[float], direction: str, strict: bool = False) -> bool:
    vals = list(values)
    pairs = list(zip(vals, vals[1:]))
    if direction == "increasing":
        return all(b > a if strict else b >= a for a, b in pairs)
    if direction == "decreasing":
        return all(b < a if strict else b <= a for a, b in pairs)
    if direction == "constant":
        return all(math.isclose(a, b, rel_tol=0, abs_tol=0) for a, b in pairs)
    raise ValueError(direction)
