"""Exception types raised by the analysis modules."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """One failed scenario invariant.

    ``kind`` is one of ``NonPositiveRate``, ``LengthMismatch``,
    ``NonPositiveParameter``, ``NegativeValuation``, ``NonFinite`` or
    ``InvalidCount``.
    """

    kind: str
    field: str
    index: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        where = self.field if self.index is None else f"{self.field}[{self.index}]"
        msg = f"{self.kind}({where})"
        return f"{msg}: {self.detail}" if self.detail else msg


class McastGameError(Exception):
    """Base class for all package errors."""


class ScenarioError(McastGameError, ValueError):
    """Raised when raw scenario fields fail validation.

    Carries the complete list of violations, not just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class SizeLimitError(McastGameError):
    """The requested enumeration exceeds the configured user cap."""

    def __init__(self, what: str, n: int, cap: int):
        self.what, self.n, self.cap = what, n, cap
        super().__init__(f"{what}: N={n} exceeds cap {cap}")


class SolverStallError(McastGameError):
    """The simplex iteration cap was reached before a verdict."""


class NotApplicableError(McastGameError, ValueError):
    pass


class UnsupportedNError(McastGameError, ValueError):
    pass


class GridDomainError(McastGameError, ValueError):
    pass
