"""Linear feasibility by phase-1 simplex.

Decides whether ``{A_eq x = b_eq, A_ge x >= b_ge}`` has a solution and
returns a witness.  Dense tableau, Bland's rule throughout.

Free variables are either shifted by caller-supplied lower bounds
(``x = lb + y``, ``y >= 0``; the bounds then act as constraints too) or split
into positive and negative parts.

Tolerances are relative to ``scale = max(1, max |rhs|)``: pivot elements
below 1e-10 are treated as zero, the system is feasible when the artificial
objective reaches 1e-9 * scale, and witnesses are re-checked against every
row at 1e-7 * scale.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
RECHECK_TOL = 1e-7


class Status(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    STALLED = "stalled"


def _as_rows(rows, n_vars: int, kind: str) -> tuple[np.ndarray, np.ndarray]:
    rows = list(rows)
    if not rows:
        return np.zeros((0, n_vars)), np.zeros(0)
    coeffs = np.array([np.asarray(r[0], dtype=np.float64) for r in rows])
    rhs = np.array([float(r[1]) for r in rows])
    if coeffs.ndim != 2 or coeffs.shape[1] != n_vars:
        raise ValueError(f"{kind} rows must have {n_vars} coefficients")
    if not (np.isfinite(coeffs).all() and np.isfinite(rhs).all()):
        raise ValueError(f"{kind} rows contain non-finite entries")
    return coeffs, rhs


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Rows are ``(coefficients, rhs)`` pairs.

    ``lower_bounds``, if given, adds ``x_i >= lower_bounds[i]`` and is used to
    shift the variables instead of splitting them.
    """

    n_vars: int
    eq_rows: Sequence = ()
    ge_rows: Sequence = ()
    lower_bounds: Sequence[float] | None = None
    A_eq: np.ndarray = field(init=False, repr=False)
    b_eq: np.ndarray = field(init=False, repr=False)
    A_ge: np.ndarray = field(init=False, repr=False)
    b_ge: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("n_vars must be positive")
        A_eq, b_eq = _as_rows(self.eq_rows, self.n_vars, "eq")
        A_ge, b_ge = _as_rows(self.ge_rows, self.n_vars, "ge")
        for name, val in (("A_eq", A_eq), ("b_eq", b_eq), ("A_ge", A_ge), ("b_ge", b_ge)):
            object.__setattr__(self, name, val)
        if self.lower_bounds is not None:
            lb = np.asarray(self.lower_bounds, dtype=np.float64)
            if lb.shape != (self.n_vars,) or not np.isfinite(lb).all():
                raise ValueError("lower_bounds must be n_vars finite values")
            object.__setattr__(self, "lower_bounds", lb)

    @classmethod
    def from_arrays(cls, A_eq=None, b_eq=None, A_ge=None, b_ge=None, lower_bounds=None, n_vars=None):
        mats = [m for m in (A_eq, A_ge) if m is not None and len(m)]
        if n_vars is None:
            n_vars = np.asarray(mats[0]).shape[1]
        eq = list(zip(A_eq, b_eq)) if A_eq is not None else []
        ge = list(zip(A_ge, b_ge)) if A_ge is not None else []
        return cls(n_vars, eq, ge, lower_bounds)

    def scale(self) -> float:
        vals = [1.0]
        if len(self.b_eq):
            vals.append(float(np.max(np.abs(self.b_eq))))
        if len(self.b_ge):
            vals.append(float(np.max(np.abs(self.b_ge))))
        return max(vals)

    def max_residual(self, x) -> float:
        """Largest violation of any row (and of the lower bounds) at ``x``."""
        x = np.asarray(x, dtype=np.float64)
        worst = 0.0
        if len(self.b_eq):
            worst = max(worst, float(np.max(np.abs(self.A_eq @ x - self.b_eq))))
        if len(self.b_ge):
            worst = max(worst, float(np.max(self.b_ge - self.A_ge @ x)))
        if self.lower_bounds is not None:
            worst = max(worst, float(np.max(self.lower_bounds - x)))
        return worst


@dataclass(frozen=True, eq=False)
class FeasibilityResult:
    status: Status
    witness: np.ndarray | None
    iterations: int
    max_residual: float
    rounds: int = 1

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


def _phase_one(A_eq, b_eq, A_ge, b_ge, iter_cap, scale):
    """Phase-1 simplex over ``y >= 0``.  Returns ``(status, y, iterations)``."""
    m_eq, nv = A_eq.shape
    m_ge = A_ge.shape[0]
    m = m_eq + m_ge
    if m == 0:
        return Status.FEASIBLE, np.zeros(nv), 0

    rows = np.zeros((m, nv + m_ge))
    rhs = np.concatenate([b_eq, b_ge]).astype(np.float64)
    rows[:m_eq, :nv] = A_eq
    rows[m_eq:, :nv] = A_ge
    rows[np.arange(m_eq, m), nv + np.arange(m_ge)] = -1.0

    basis = np.full(m, -1, dtype=np.int64)
    needs_art = np.ones(m, dtype=bool)
    for r in range(m):
        if r >= m_eq and rhs[r] <= 0:
            # -a.y + s = -b >= 0: the surplus variable starts basic
            rows[r] = -rows[r]
            rhs[r] = -rhs[r]
            basis[r] = nv + (r - m_eq)
            needs_art[r] = False
        elif rhs[r] < 0:
            rows[r] = -rows[r]
            rhs[r] = -rhs[r]
    art_rows = np.flatnonzero(needs_art)
    n_art = len(art_rows)
    n_real = nv + m_ge
    ncol = n_real + n_art

    T = np.zeros((m + 1, ncol + 1))
    T[:m, :n_real] = rows
    T[art_rows, n_real + np.arange(n_art)] = 1.0
    T[:m, -1] = rhs
    basis[art_rows] = n_real + np.arange(n_art)
    # reduced costs of "minimise the sum of artificials"
    T[m, :] = -T[art_rows, :].sum(axis=0)
    T[m, n_real:ncol] = 0.0

    goal = FEAS_TOL * scale
    it = 0
    while True:
        if -T[m, -1] <= goal:
            break
        neg = np.flatnonzero(T[m, :n_real] < -PIVOT_TOL)
        if len(neg) == 0:
            break
        if it >= iter_cap:
            return Status.STALLED, None, it
        j = int(neg[0])  # Bland: lowest-index improving column
        col = T[:m, j]
        cand = np.flatnonzero(col > PIVOT_TOL)
        if len(cand) == 0:
            # phase-1 objective is bounded below; only reachable through round-off
            return Status.STALLED, None, it
        ratios = T[cand, -1] / col[cand]
        rmin = ratios.min()
        ties = cand[ratios <= rmin + 1e-12 * max(1.0, abs(rmin))]
        r = int(ties[np.argmin(basis[ties])])  # Bland: lowest-index leaving variable
        T[r] /= T[r, j]
        piv = T[:, j].copy()
        piv[r] = 0.0
        T -= np.outer(piv, T[r])
        T[:m, -1][np.abs(T[:m, -1]) < PIVOT_TOL * scale * 1e-3] = 0.0
        basis[r] = j
        it += 1

    if -T[m, -1] > goal:
        return Status.INFEASIBLE, None, it
    y = np.zeros(ncol)
    y[basis] = T[:m, -1]
    return Status.FEASIBLE, np.maximum(y[:nv], 0.0), it


def solve_feasibility(sys: LinearSystem, iter_cap: int = 100_000, scale: float | None = None) -> FeasibilityResult:
    if iter_cap <= 0:
        raise ValueError("iter_cap must be positive")
    sc = sys.scale() if scale is None else scale
    n = sys.n_vars
    if sys.lower_bounds is not None:
        lb = sys.lower_bounds
        status, y, it = _phase_one(sys.A_eq, sys.b_eq - sys.A_eq @ lb, sys.A_ge, sys.b_ge - sys.A_ge @ lb, iter_cap, sc)
        x = None if y is None else lb + y
    else:
        split = lambda A: np.hstack([A, -A])  # noqa: E731
        status, y, it = _phase_one(split(sys.A_eq), sys.b_eq, split(sys.A_ge), sys.b_ge, iter_cap, sc)
        x = None if y is None else y[:n] - y[n:]
    if status is not Status.FEASIBLE:
        return FeasibilityResult(status, None, it, math.nan)
    return FeasibilityResult(status, x, it, sys.max_residual(x))


Separator = Callable[[np.ndarray], tuple[list, float]]


def solve_feasibility_lazy(
    n_vars: int,
    eq_rows: Iterable,
    separate: Separator,
    initial_rows: Iterable = (),
    lower_bounds: Sequence[float] | None = None,
    scale: float = 1.0,
    iter_cap: int = 100_000,
) -> FeasibilityResult:
    """Feasibility of a system whose ``>=`` rows are generated on demand.

    ``separate(x)`` returns ``(rows, max_violation)`` where ``rows`` lists
    ``(key, coefficients, rhs)`` for rows violated at ``x`` by more than the
    feasibility tolerance, and ``max_violation`` is the largest violation over
    the full row set.  Rows are added until the witness of the active
    subsystem violates nothing; an infeasible subsystem proves the full
    system infeasible.
    """
    eq_rows = list(eq_rows)
    active: dict = {}
    for key, coeffs, rhs in initial_rows:
        active.setdefault(key, (coeffs, rhs))
    total = 0
    rounds = 0
    while True:
        rounds += 1
        sub = LinearSystem(n_vars, eq_rows, list(active.values()), lower_bounds)
        res = solve_feasibility(sub, max(1, iter_cap - total), scale=scale)
        total += res.iterations
        if res.status is not Status.FEASIBLE:
            return FeasibilityResult(res.status, None, total, math.nan, rounds)
        rows, worst = separate(res.witness)
        fresh = [(k, c, b) for k, c, b in rows if k not in active]
        eq_res = 0.0 if not eq_rows else sub.max_residual(res.witness)
        if not fresh:
            return FeasibilityResult(Status.FEASIBLE, res.witness, total, max(worst, eq_res), rounds)
        if total >= iter_cap:
            return FeasibilityResult(Status.STALLED, None, total, math.nan, rounds)
        for k, c, b in fresh:
            active[k] = (c, b)
