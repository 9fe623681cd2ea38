"""Game instances, derived cost constants, and coalition/partition types.

Coalitions are plain ``int`` bitmasks over 0-based user indices: bit ``i`` set
means user ``i`` is a member.  This is the canonical representation used by
every analysis routine; ``mask_of`` and ``members`` convert to and from index
lists.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ScenarioError, UnsupportedNError, Violation

# Default parameter values of the reference numerical study.
DEFAULT_TX_POWER = 2.0
DEFAULT_A = 5.0
DEFAULT_B = 1.5
DEFAULT_W = 0.5
DEFAULT_FILE_SIZE = 10.0
VALUATION_RANGE = (90.0, 100.0)
RX_POWER_RANGE = (0.2, 0.4)

DEFAULT_BASES = (20.0, 100.0, 150.0, 200.0)
DEFAULT_RATES = (
    20.0, 25.0, 30.0, 35.0, 40.0,
    100.0, 105.0, 110.0, 115.0, 120.0,
    150.0, 155.0, 160.0, 165.0, 170.0,
    200.0, 205.0, 210.0, 215.0, 220.0,
)

SCENARIO_KEYS = ("n", "rates", "valuations", "rx_powers", "tx_power", "a", "b", "w", "file_size")
_POSITIVE_PARAMS = ("tx_power", "a", "b", "w", "file_size")


def _collect_violations(n, rates, valuations, rx_powers, params: Mapping[str, float]) -> list[Violation]:
    out: list[Violation] = []
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        out.append(Violation("InvalidCount", "n", detail=f"expected integer >= 1, got {n!r}"))
        n = None
    for name, seq in (("rates", rates), ("valuations", valuations), ("rx_powers", rx_powers)):
        if n is not None and len(seq) != n:
            out.append(Violation("LengthMismatch", name, detail=f"length {len(seq)} != n={n}"))
    for i, r in enumerate(rates):
        if not math.isfinite(r):
            out.append(Violation("NonFinite", "rates", i))
        elif r <= 0:
            out.append(Violation("NonPositiveRate", "rates", i, f"{r!r}"))
    for i, u in enumerate(valuations):
        if not math.isfinite(u):
            out.append(Violation("NonFinite", "valuations", i))
        elif u < 0:
            out.append(Violation("NegativeValuation", "valuations", i, f"{u!r}"))
    for i, p in enumerate(rx_powers):
        if not math.isfinite(p):
            out.append(Violation("NonFinite", "rx_powers", i))
        elif p <= 0:
            out.append(Violation("NonPositiveParameter", "rx_powers", i, f"{p!r}"))
    for name in _POSITIVE_PARAMS:
        v = params[name]
        if not math.isfinite(v):
            out.append(Violation("NonFinite", name))
        elif v <= 0:
            out.append(Violation("NonPositiveParameter", name, detail=f"{v!r}"))
    return out


@dataclass(frozen=True)
class Scenario:
    """A complete game instance.

    Immutable and hashable; list arguments are stored as tuples of floats.
    Construction validates every invariant and raises ``ScenarioError`` with
    the full violation list.
    """

    n: int
    rates: tuple[float, ...]
    valuations: tuple[float, ...]
    rx_powers: tuple[float, ...]
    tx_power: float = DEFAULT_TX_POWER
    a: float = DEFAULT_A
    b: float = DEFAULT_B
    w: float = DEFAULT_W
    file_size: float = DEFAULT_FILE_SIZE

    def __post_init__(self):
        for name in ("rates", "valuations", "rx_powers"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        for name in _POSITIVE_PARAMS:
            object.__setattr__(self, name, float(getattr(self, name)))
        violations = _collect_violations(
            self.n, self.rates, self.valuations, self.rx_powers,
            {k: getattr(self, k) for k in _POSITIVE_PARAMS},
        )
        if violations:
            raise ScenarioError(violations)
        object.__setattr__(self, "n", int(self.n))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def replace(self, **changes) -> Scenario:
        if "rates" in changes and "n" not in changes:
            changes["n"] = len(changes["rates"])
        return replace(self, **changes)

    def subset(self, users: Iterable[int]) -> Scenario:
        """Sub-scenario on the given 0-based users, in the given order."""
        idx = list(users)
        return replace(
            self,
            n=len(idx),
            rates=[self.rates[i] for i in idx],
            valuations=[self.valuations[i] for i in idx],
            rx_powers=[self.rx_powers[i] for i in idx],
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("rates", "valuations", "rx_powers"):
            d[k] = list(d[k])
        return d


@dataclass(frozen=True)
class DerivedConstants:
    alphas: tuple[float, ...]
    beta: float
    gamma: float

    @property
    def cost(self) -> float:
        """Transmitter energy plus bandwidth constant, shared per transmission."""
        return self.beta + self.gamma

    @property
    def alpha_min(self) -> float:
        return min(self.alphas)

    @property
    def alpha_max(self) -> float:
        return max(self.alphas)


def derive_constants(s: Scenario) -> DerivedConstants:
    x = s.file_size
    return DerivedConstants(
        alphas=tuple(s.a * p * x for p in s.rx_powers),
        beta=s.b * s.tx_power * x,
        gamma=s.w * x,
    )


def validate_scenario(raw: Mapping) -> Scenario:
    """Build a Scenario from raw fields or raise with every violation found.

    Missing cost parameters default to the reference values; ``n`` defaults
    to ``len(rates)``.
    """
    missing = [k for k in ("rates", "valuations", "rx_powers") if k not in raw]
    if missing:
        raise ScenarioError([Violation("Missing", k) for k in missing])
    rates = [float(r) for r in raw["rates"]]
    fields = {
        "n": raw.get("n", len(rates)),
        "rates": rates,
        "valuations": [float(u) for u in raw["valuations"]],
        "rx_powers": [float(p) for p in raw["rx_powers"]],
        "tx_power": float(raw.get("tx_power", DEFAULT_TX_POWER)),
        "a": float(raw.get("a", DEFAULT_A)),
        "b": float(raw.get("b", DEFAULT_B)),
        "w": float(raw.get("w", DEFAULT_W)),
        "file_size": float(raw.get("file_size", DEFAULT_FILE_SIZE)),
    }
    return Scenario(**fields)


# --------------------------------------------------------------------------
# Rate rules and the seeded generator
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExplicitList:
    rates: tuple[float, ...]

    def rates_for(self, n: int) -> tuple[float, ...]:
        if len(self.rates) != n:
            raise ScenarioError([Violation("LengthMismatch", "rates", detail=f"{len(self.rates)} != n={n}")])
        return tuple(float(r) for r in self.rates)


@dataclass(frozen=True)
class BandedFormula:
    """Rates ``B[ceil(i/block)] + step*((i-1) mod block)`` for 1-based ``i``."""

    bases: tuple[float, ...] = DEFAULT_BASES
    step: float = 5.0
    block: int = 5

    def rates_for(self, n: int) -> tuple[float, ...]:
        if n > self.block * len(self.bases):
            raise UnsupportedNError(
                f"banded rule defines {self.block * len(self.bases)} users; n={n} needs more bases"
            )
        return tuple(
            float(self.bases[(i - 1) // self.block] + self.step * ((i - 1) % self.block))
            for i in range(1, n + 1)
        )


def banded_rates(n: int, bases: Sequence[float] = DEFAULT_BASES, step: float = 5.0, block: int = 5):
    return BandedFormula(tuple(bases), step, block).rates_for(n)


def uniform_draws(seed: int, count: int) -> np.ndarray:
    """``count`` doubles in [0, 1) from PCG64 keyed by ``seed``.

    Uses the raw 64-bit PCG64 output stream and keeps the top 53 bits, so the
    sequence depends only on the PCG64 algorithm and numpy's SeedSequence
    seeding, not on any distribution-method implementation.
    """
    raw = np.random.PCG64(seed).random_raw(count)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def generate_scenario(seed: int, n: int, rate_rule=None, **params) -> Scenario:
    """Draw valuations and receive powers for ``n`` users.

    Draws are consumed per user in index order, valuation first, then
    receive power.  ``rate_rule`` defaults to the banded formula; ``params``
    overrides the cost constants.
    """
    if n < 1:
        raise ScenarioError([Violation("InvalidCount", "n", detail=str(n))])
    rule = BandedFormula() if rate_rule is None else rate_rule
    rates = rule.rates_for(n)
    u = uniform_draws(seed, 2 * n).reshape(n, 2)
    ulo, uhi = VALUATION_RANGE
    plo, phi = RX_POWER_RANGE
    return Scenario(
        n=n,
        rates=rates,
        valuations=ulo + (uhi - ulo) * u[:, 0],
        rx_powers=plo + (phi - plo) * u[:, 1],
        **params,
    )


def deterministic_scenario(n: int = 20, valuation: float = 95.0, rx_power: float = 0.3) -> Scenario:
    """Reference study with the random draws replaced by their midpoints."""
    return Scenario(n=n, rates=banded_rates(n), valuations=[valuation] * n, rx_powers=[rx_power] * n)


def symmetric_scenario(n: int, rate: float, valuations=None, rx_power: float = 0.3, **params) -> Scenario:
    vals = [95.0] * n if valuations is None else list(valuations)
    return Scenario(n=n, rates=[rate] * n, valuations=vals, rx_powers=[rx_power] * n, **params)


# --------------------------------------------------------------------------
# Scenario files
# --------------------------------------------------------------------------


def rate_rule_from_json(obj) -> ExplicitList | BandedFormula:
    if obj in (None, "banded"):
        return BandedFormula()
    if isinstance(obj, Mapping):
        if "explicit" in obj:
            return ExplicitList(tuple(obj["explicit"]))
        if "banded" in obj:
            spec = obj["banded"] or {}
            return BandedFormula(
                tuple(spec.get("bases", DEFAULT_BASES)), float(spec.get("step", 5.0)), int(spec.get("block", 5))
            )
    raise ValueError(f"unrecognised rate_rule {obj!r}")


def scenario_from_json(doc: Mapping) -> Scenario:
    """Scenario from a parsed scenario document.

    Explicit fields take precedence; a document holding only a ``generator``
    block (plus optional cost overrides) is expanded with
    ``generate_scenario``.
    """
    if "rates" in doc or "valuations" in doc or "rx_powers" in doc:
        return validate_scenario(doc)
    gen = doc.get("generator")
    if gen is None:
        return validate_scenario(doc)  # reports the missing fields
    overrides = {k: doc[k] for k in _POSITIVE_PARAMS if k in doc}
    return generate_scenario(int(gen["seed"]), int(gen["n"]), rate_rule_from_json(gen.get("rate_rule")), **overrides)


def load_scenario(path: str | Path) -> Scenario:
    with open(path) as fh:
        return scenario_from_json(json.load(fh))


def dump_scenario(s: Scenario, path: str | Path | None = None, generator: Mapping | None = None) -> str:
    doc = s.to_dict()
    if generator is not None:
        doc["generator"] = dict(generator)
    text = json.dumps(doc, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


# --------------------------------------------------------------------------
# Coalitions, partitions, collections
# --------------------------------------------------------------------------


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        if i < 0:
            raise ValueError(f"negative user index {i}")
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def coalition(indices: Iterable[int], n: int) -> int:
    """Validated coalition mask: non-empty, all indices in ``[0, n)``."""
    idx = list(indices)
    if not idx:
        raise ValueError("coalition must be non-empty")
    bad = [i for i in idx if not 0 <= i < n]
    if bad:
        raise ValueError(f"user indices out of range [0, {n}): {bad}")
    return mask_of(idx)


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length()


def _check_blocks(n: int, blocks: Sequence[int]) -> None:
    seen = 0
    for b in blocks:
        if b <= 0:
            raise ValueError("empty block")
        if b >> n:
            raise ValueError(f"block {members(b)} has users outside [0, {n})")
        if seen & b:
            raise ValueError(f"blocks overlap on users {members(seen & b)}")
        seen |= b


@dataclass(frozen=True)
class Collection:
    """Mutually disjoint non-empty coalitions; need not cover every user."""

    n: int
    parts: tuple[int, ...] = field(default=())

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), key=_lowest_bit))
        _check_blocks(self.n, parts)
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_lists(cls, n: int, lists: Iterable[Iterable[int]]):
        return cls(n, tuple(coalition(l, n) for l in lists))

    @property
    def union(self) -> int:
        u = 0
        for p in self.parts:
            u |= p
        return u

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def to_lists(self) -> list[list[int]]:
        return [members(p) for p in self.parts]


@dataclass(frozen=True)
class Partition(Collection):
    """A collection whose parts cover all ``n`` users.

    ``blocks`` is an alias of ``parts``.  Blocks are stored in canonical order
    (by lowest member).
    """

    def __post_init__(self):
        super().__post_init__()
        if self.union != (1 << self.n) - 1:
            raise ValueError(f"partition does not cover users {members(((1 << self.n) - 1) & ~self.union)}")

    @property
    def blocks(self) -> tuple[int, ...]:
        return self.parts

    @classmethod
    def grand(cls, n: int) -> Partition:
        return cls(n, ((1 << n) - 1,))

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def sequential(cls, n: int, size: int) -> Partition:
        return cls(n, tuple(mask_of(range(s, min(s + size, n))) for s in range(0, n, size)))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> Partition:
        """Partition from a block label per user (e.g. a restricted growth string)."""
        groups: dict[int, int] = {}
        for i, lab in enumerate(labels):
            groups[int(lab)] = groups.get(int(lab), 0) | (1 << i)
        return cls(len(labels), tuple(groups.values()))

    def labels(self) -> list[int]:
        lab = [0] * self.n
        for k, b in enumerate(self.blocks):
            for i in members(b):
                lab[i] = k
        return lab


def parse_blocks(text: str, n: int, one_based: bool = True) -> list[list[int]]:
    """Parse ``"1,2,3;4,5"`` into lists of 0-based user indices."""
    off = 1 if one_based else 0
    blocks = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        blocks.append([int(tok) - off for tok in chunk.split(",") if tok.strip()])
    for b in blocks:
        coalition(b, n)
    return blocks


def format_blocks(lists: Iterable[Iterable[int]], one_based: bool = True) -> str:
    off = 1 if one_based else 0
    return ";".join(",".join(str(i + off) for i in b) for b in lists)
