import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mcastgame.core import (
    core_nonempty,
    core_screen,
    is_convex,
    is_convex_pairwise,
    is_in_core,
    symmetric_core_profile,
    thm_max_min_empty,
    thm_rate_ratio_nonempty,
    thm_second_min_empty,
    thm_symmetric_nonempty,
)
from mcastgame.errors import NotApplicableError, SizeLimitError
from mcastgame.scenario import Scenario, coalition, deterministic_scenario, generate_scenario, symmetric_scenario
from mcastgame.value import coalition_value, value_table

from fuzz import near_equal_rates, random_scenario, slow_outlier

DET = deterministic_scenario()


def test_equal_split_is_blocked_by_fastest_band():
    x = np.full(20, 1883.25 / 20)
    verdict = is_in_core(DET, x)
    assert not verdict.feasible
    fast = coalition(range(15, 20), 20)
    assert math.isclose(coalition_value(DET, fast), 474.45)
    assert math.isclose(x[15:].sum(), 470.8125)
    assert "coalitional rationality" in verdict.reason


def test_membership_checks_efficiency():
    s = symmetric_scenario(3, 50)
    x = symmetric_core_profile(s)
    assert is_in_core(s, x).feasible
    v = is_in_core(s, x + 1)
    assert not v.feasible and "efficiency" in v.reason


def test_single_user():
    s = Scenario(n=1, rates=[10], valuations=[95], rx_powers=[0.3])
    r = core_nonempty(s)
    assert r.feasible and math.isclose(r.witness[0], coalition_value(s, 1))
    assert is_convex(s).convex
    assert thm_symmetric_nonempty(s).fires
    assert not thm_second_min_empty(s).applicable


def test_deterministic_core_is_empty_by_lp():
    with pytest.raises(SizeLimitError):
        core_nonempty(DET)
    assert not core_nonempty(DET, cap=20).feasible


def test_deterministic_checkers():
    lam = thm_second_min_empty(DET)
    mu = thm_max_min_empty(DET)
    ratio = thm_rate_ratio_nonempty(DET)
    assert lam.fires and math.isclose(lam.lhs, 1.25) and abs(lam.rhs - (1 + 35 / (15 * 19))) < 1e-12
    assert mu.fires and math.isclose(mu.lhs, 11) and math.isclose(mu.rhs, 1 + 35 / 15)
    assert not ratio.fires and math.isclose(ratio.lhs, 11)
    assert math.isclose(ratio.rhs, (20 / 19) * (15 * 19 + 35) / (15 * 20 + 35))
    verdict, _, fired = core_screen(DET)
    assert verdict is False and fired == ["second_min_empty", "max_min_empty"]


def test_emptiness_checkers_need_equal_rx_power():
    s = generate_scenario(1, 5)
    assert not thm_second_min_empty(s).applicable
    assert not thm_max_min_empty(s).applicable
    assert "receive powers differ" in thm_max_min_empty(s).note


def test_three_user_subscenario_convexity_matches_definition():
    sub = DET.subset([0, 5, 15])
    assert is_convex(sub).convex == is_convex_pairwise(sub).convex


def test_local_convexity_test_matches_pairwise_definition():
    kinds = set()
    for seed in range(120):
        s = random_scenario(seed, 2 + seed % 5)
        fast, slow = is_convex(s), is_convex_pairwise(s)
        assert fast.convex == slow.convex, seed
        kinds.add(fast.convex)
        if not fast.convex:
            a, b = fast.counterexample
            v = value_table(s)
            assert v[a] + v[b] > v[a | b] + v[a & b]
    assert kinds == {True, False}


def test_symmetric_profile_preconditions():
    with pytest.raises(NotApplicableError):
        symmetric_core_profile(generate_scenario(0, 4))


@pytest.mark.parametrize("seed", range(40))
def test_fired_conditions_agree_with_lp(seed):
    for s in (near_equal_rates(seed, 2 + seed % 8), slow_outlier(seed, 2 + seed % 8)):
        verdict, _, _ = core_screen(s)
        if verdict is not None:
            assert core_nonempty(s).feasible == verdict


def test_lp_witness_is_in_core():
    for seed in range(30):
        s = random_scenario(seed, 3 + seed % 6)
        r = core_nonempty(s)
        if r.feasible:
            assert is_in_core(s, r.witness, tol=1e-7).feasible


def test_convex_implies_nonempty():
    for seed in range(40):
        s = near_equal_rates(seed, 2 + seed % 7)
        if is_convex(s).convex:
            assert core_nonempty(s).feasible


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 8))
def test_emptiness_ratios_fall_as_reception_cost_rises(seed, n):
    s = slow_outlier(seed, n)
    prev = [math.inf, math.inf]
    for p in (0.1, 0.2, 0.4, 0.8):
        t = s.replace(rx_powers=[p] * n)
        rhs = [thm_second_min_empty(t).rhs, thm_max_min_empty(t).rhs]
        assert rhs[0] < prev[0] and rhs[1] < prev[1]
        prev = rhs
