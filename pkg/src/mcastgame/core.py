"""Core membership, core non-emptiness, convexity, and the closed-form
sufficient conditions for a non-empty or an empty core."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels, limits
from .errors import McastGameError, NotApplicableError, SolverStallError
from .lp import FEAS_TOL, RECHECK_TOL, Status, solve_feasibility_lazy
from .scenario import Scenario, derive_constants
from .value import table_scale, value_table


@dataclass(frozen=True, eq=False)
class CoreVerdict:
    feasible: bool
    witness: np.ndarray | None = None
    violated: int | None = None
    method: str = "LP"
    reason: str = ""
    iterations: int = 0


@dataclass(frozen=True)
class TheoremApplicability:
    """Outcome of a closed-form sufficient condition.

    ``condition_holds`` is ``None`` when the hypotheses are not met.  ``lhs``
    and ``rhs`` are the two sides of the (binding) inequality; ``None`` when
    there is no inequality to evaluate.
    """

    name: str
    applicable: bool
    condition_holds: bool | None
    lhs: float | None = None
    rhs: float | None = None
    relation: str = "<="
    note: str = ""
    diagnostics: dict = field(default_factory=dict)

    @property
    def fires(self) -> bool:
        return bool(self.applicable and self.condition_holds)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "applicable": self.applicable,
            "condition_holds": self.condition_holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "note": self.note,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class ConvexityVerdict:
    convex: bool
    counterexample: tuple[int, int] | None = None


# --------------------------------------------------------------------------
# Core membership and non-emptiness
# --------------------------------------------------------------------------


def is_in_core(s: Scenario, x, tol: float = 1e-9, cap: int | None = None) -> CoreVerdict:
    """Check efficiency and coalitional rationality of payoff profile ``x``.

    Tolerances are relative to ``max(1, |v(N)|)``.  ``violated`` is the first
    blocking coalition in bitmask order, if any.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    limits.check("core", s.n, cap, "is_in_core")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (s.n,) or not np.isfinite(x).all():
        raise ValueError(f"payoff profile must be {s.n} finite values")
    v = value_table(s)
    v_grand = float(v[-1])
    slack = tol * max(1.0, abs(v_grand))
    excess = v - kernels.subset_sums(x)
    excess[0] = -math.inf
    blocked = np.flatnonzero(excess > slack)
    violated = int(blocked[0]) if len(blocked) else None
    reasons = []
    if abs(math.fsum(x) - v_grand) > slack:
        reasons.append("efficiency")
    if violated is not None:
        reasons.append("coalitional rationality")
    return CoreVerdict(
        feasible=not reasons,
        witness=x if not reasons else None,
        violated=violated,
        method="membership",
        reason=", ".join(reasons),
    )


def core_nonempty(s: Scenario, iter_cap: int = 200_000, cap: int | None = None, batch: int | None = None) -> CoreVerdict:
    """Decide core non-emptiness by linear feasibility.

    Variables are shifted by the singleton values ``x_i >= v({i})``; the
    remaining coalition rows are generated lazily, most violated first.
    A feasible witness is re-verified with ``is_in_core`` at 1e-7.
    """
    n = s.n
    limits.check("lp", n, cap, "core_nonempty")
    v = value_table(s)
    if n == 1:
        x = np.array([v[1]])
        return CoreVerdict(True, x, method="LP")
    full = (1 << n) - 1
    singles = np.array([v[1 << i] for i in range(n)])
    scale = table_scale(v)
    threshold = FEAS_TOL * scale
    per_round = batch or max(8, 2 * n)
    bits = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1 if n <= 16 else None

    def coeffs(mask):
        if bits is not None:
            return bits[mask].astype(np.float64)
        return np.array([(mask >> i) & 1 for i in range(n)], dtype=np.float64)

    def separate(x):
        excess = v - kernels.subset_sums(x)
        excess[0] = excess[full] = -math.inf
        for i in range(n):
            excess[1 << i] = -math.inf  # implied by the variable shift
        worst = float(excess.max())
        idx = np.flatnonzero(excess > threshold)
        if len(idx) > per_round:
            idx = idx[np.argsort(-excess[idx], kind="stable")[:per_round]]
        return [(int(m), coeffs(int(m)), float(v[m])) for m in idx], max(0.0, worst)

    leave_one_out = [(full ^ (1 << i), coeffs(full ^ (1 << i)), float(v[full ^ (1 << i)])) for i in range(n)]
    res = solve_feasibility_lazy(
        n,
        [(np.ones(n), float(v[full]))],
        separate,
        initial_rows=leave_one_out if n > 2 else (),
        lower_bounds=singles,
        scale=scale,
        iter_cap=iter_cap,
    )
    if res.status is Status.STALLED:
        raise SolverStallError(f"simplex hit the iteration cap ({iter_cap}) after {res.rounds} rounds")
    if res.status is Status.INFEASIBLE:
        return CoreVerdict(False, method="LP", reason="linear system infeasible", iterations=res.iterations)
    check = is_in_core(s, res.witness, tol=RECHECK_TOL)
    if not check.feasible:
        raise McastGameError(f"LP witness failed re-verification ({check.reason})")
    return CoreVerdict(True, res.witness, method="LP", iterations=res.iterations)


# --------------------------------------------------------------------------
# Convexity
# --------------------------------------------------------------------------


def is_convex(s: Scenario, tol: float = 1e-9, cap: int | None = None) -> ConvexityVerdict:
    """Supermodularity test via increasing marginal contributions.

    ``v(S+i) + v(S+j) <= v(S+i+j) + v(S)`` for all ``S`` and ``i, j`` outside
    ``S`` is equivalent to the pairwise definition and costs
    ``O(2^n n^2)``.  A failure is itself a pairwise counterexample
    ``(S+i, S+j)``.
    """
    limits.check("convex", s.n, cap, "is_convex")
    v = value_table(s)
    hit = kernels.first_convexity_violation(v, s.n, tol * table_scale(v))
    if hit is None:
        return ConvexityVerdict(True)
    base, i, j = hit
    return ConvexityVerdict(False, (base | (1 << i), base | (1 << j)))


def is_convex_pairwise(s: Scenario, tol: float = 1e-9, cap: int = 10) -> ConvexityVerdict:
    """Convexity straight from the definition, over all ordered pairs."""
    limits.check("convex", s.n, cap, "is_convex_pairwise")
    v = value_table(s)
    t = tol * table_scale(v)
    size = 1 << s.n
    for a in range(size):
        for b in range(size):
            if v[a] + v[b] > v[a | b] + v[a & b] + t:
                return ConvexityVerdict(False, (a, b))
    return ConvexityVerdict(True)


# --------------------------------------------------------------------------
# Symmetric games
# --------------------------------------------------------------------------


def _uniform(values) -> bool:
    return len(set(values)) == 1


def symmetric_core_profile(s: Scenario) -> np.ndarray:
    """Equal split of the shared transmission cost on top of each user's own
    reception cost.  Requires equal rates and equal receive powers."""
    if not _uniform(s.rates):
        raise NotApplicableError("rates are not all equal")
    if not _uniform(s.rx_powers):
        raise NotApplicableError("receive powers are not all equal")
    k = derive_constants(s)
    r0 = s.rates[0]
    alpha = k.alphas[0]
    return np.array([u - alpha / r0 - k.cost / (s.n * r0) for u in s.valuations])


# --------------------------------------------------------------------------
# Closed-form sufficient conditions
# --------------------------------------------------------------------------


def _argmin(values, exclude=None) -> int:
    return min((i for i in range(len(values)) if i != exclude), key=lambda i: values[i])


def _argmax(values) -> int:
    return max(range(len(values)), key=lambda i: values[i])


def thm_symmetric_nonempty(s: Scenario) -> TheoremApplicability:
    same_rate, same_power = _uniform(s.rates), _uniform(s.rx_powers)
    ok = same_rate and same_power
    note = "" if ok else ", ".join(
        msg for flag, msg in ((same_rate, "rates differ"), (same_power, "receive powers differ")) if not flag
    )
    return TheoremApplicability("symmetric_nonempty", ok, True if ok else None, note=note)


def thm_rate_ratio_nonempty(s: Scenario) -> TheoremApplicability:
    """Non-empty core when ``R_max / R_min`` is small enough."""
    n = s.n
    if n < 2:
        return TheoremApplicability("rate_ratio_nonempty", False, None, note="needs N >= 2")
    k = derive_constants(s)
    lhs = max(s.rates) / min(s.rates)
    rhs = (n / (n - 1)) * (k.alpha_min * (n - 1) + k.cost) / (k.alpha_max * n + k.cost)
    return TheoremApplicability(
        "rate_ratio_nonempty", True, lhs <= rhs, lhs, rhs, "<=",
        diagnostics={"R_min": min(s.rates), "R_max": max(s.rates), "alpha_min": k.alpha_min, "alpha_max": k.alpha_max},
    )


def thm_second_min_empty(s: Scenario) -> TheoremApplicability:
    """Empty core when the slowest user is far below the second slowest."""
    name = "second_min_empty"
    if s.n < 2:
        return TheoremApplicability(name, False, None, relation=">", note="needs N >= 2")
    if not _uniform(s.rx_powers):
        return TheoremApplicability(name, False, None, relation=">", note="receive powers differ")
    k_const = derive_constants(s)
    alpha = k_const.alphas[0]
    k = _argmin(s.rates)
    j = _argmin(s.rates, exclude=k)
    lam = s.rates[j] / s.rates[k]
    rhs = 1.0 + k_const.cost / (alpha * (s.n - 1))
    return TheoremApplicability(
        name, True, lam > rhs, lam, rhs, ">",
        diagnostics={"lambda": lam, "k": k, "j": j, "alpha": alpha},
    )


def thm_max_min_empty(s: Scenario) -> TheoremApplicability:
    """Empty core when the fastest user is far above the slowest."""
    name = "max_min_empty"
    if s.n < 2:
        return TheoremApplicability(name, False, None, relation=">", note="needs N >= 2")
    if not _uniform(s.rx_powers):
        return TheoremApplicability(name, False, None, relation=">", note="receive powers differ")
    k_const = derive_constants(s)
    alpha = k_const.alphas[0]
    k = _argmin(s.rates)
    m = _argmax(s.rates)
    mu = s.rates[m] / s.rates[k]
    rhs = 1.0 + k_const.cost / alpha
    return TheoremApplicability(
        name, True, mu > rhs, mu, rhs, ">",
        diagnostics={"mu": mu, "k": k, "m": m, "alpha": alpha},
    )


CORE_THEOREMS = {
    "symmetric_nonempty": (thm_symmetric_nonempty, True),
    "rate_ratio_nonempty": (thm_rate_ratio_nonempty, True),
    "second_min_empty": (thm_second_min_empty, False),
    "max_min_empty": (thm_max_min_empty, False),
}


def core_screen(s: Scenario) -> tuple[bool | None, list[TheoremApplicability], list[str]]:
    """Run every closed-form core condition.

    Returns ``(verdict, results, fired)`` where verdict is True (non-empty),
    False (empty) or None (inconclusive).
    """
    results, fired, verdicts = [], [], set()
    for name, (fn, nonempty) in CORE_THEOREMS.items():
        r = fn(s)
        results.append(r)
        if r.fires:
            fired.append(name)
            verdicts.add(nonempty)
    if len(verdicts) > 1:
        raise McastGameError(f"contradictory sufficient conditions fired: {fired}")
    return (verdicts.pop() if verdicts else None), results, fired
