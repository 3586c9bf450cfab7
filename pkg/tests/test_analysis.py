import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boardsplit.analysis import (
    AnalysisParams,
    count_eval_error_prob,
    error_model_curve,
    fair_p,
    geometric_side,
    max_count_nontrap_prob,
    mc_max_count_nontrap,
    mc_propagate,
    model_side,
    p0_curve,
    propagate_to_root,
    random_miss_prob,
    random_miss_prob_sum,
    row_trap_prob,
    trap_count_pmf,
)


def bisect_root(b):
    # independent oracle: naive bisection on (1-x)^b - x
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if (1 - mid) ** b - mid > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def test_fair_p_residuals_and_known_roots():
    for b in range(1, 11):
        p = fair_p(b)
        assert abs((1 - p) ** b - p) < 1e-12
    assert abs(fair_p(1) - 0.5) < 1e-12
    assert abs(fair_p(2) - (3 - math.sqrt(5)) / 2) < 1e-10
    assert abs(fair_p(3) - bisect_root(3)) < 1e-12
    assert round(fair_p(3), 6) == 0.317672


def test_fair_p_monotone_decreasing():
    values = [fair_p(b) for b in range(1, 11)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_fair_p_rejects_bad_branching():
    with pytest.raises(ValueError):
        fair_p(0)


def test_model_side_examples():
    assert model_side(3, 5, 4) == 9
    assert model_side(3, 5, 8) == 1
    assert model_side(2, 6, 0) == 32
    with pytest.raises(ValueError):
        model_side(3, 5, 10)
    with pytest.raises(ValueError):
        model_side(3, 5, 3)


def test_geometric_side_is_one_split_larger():
    for k in (0, 2, 4, 6, 8):
        assert geometric_side(3, 5, k) == 3 * model_side(3, 5, k)


def test_analysis_params_validation():
    AnalysisParams(3, 6, 0.3, 10)
    with pytest.raises(ValueError):
        AnalysisParams(3, 6, 0.3, 11)
    with pytest.raises(ValueError):
        AnalysisParams(3, 6, 0.3, 12)
    with pytest.raises(ValueError):
        AnalysisParams(3, 6, 1.3, 4)


def test_row_trap_prob_examples():
    assert row_trap_prob(1, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert row_trap_prob(2, 0.5) == pytest.approx(0.4375, abs=1e-15)
    assert row_trap_prob(3, 0.0) == 0.0
    assert row_trap_prob(3, 1.0) == 1.0
    # tiny p^S keeps relative precision instead of flushing to zero
    tiny = row_trap_prob(81, fair_p(3))
    assert tiny == pytest.approx(3.7051062000248274e-39, rel=1e-10)


def test_row_trap_prob_matches_monte_carlo():
    rng = np.random.Generator(np.random.PCG64(5))
    trials = 100000
    for s in (1, 2, 3, 4):
        for p in (0.1, fair_p(3), 0.5):
            boards = rng.random((trials, s, s)) < p
            hit = boards.all(axis=2).any(axis=1).mean()
            expected = row_trap_prob(s, p)
            sigma = max((expected * (1 - expected) / trials) ** 0.5, 1e-9)
            assert abs(hit - expected) < 3 * sigma


def test_trap_count_pmf():
    assert trap_count_pmf(2, 0.4375, 1) == pytest.approx(0.4921875, abs=1e-15)
    assert trap_count_pmf(5, 0.0, 0) == 1.0
    for b in (2, 3, 5):
        for p in (0.0, 0.3, 0.9):
            assert sum(trap_count_pmf(b, p, i) for i in range(b + 1)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        trap_count_pmf(3, 0.5, 4)


def direct_max_count_nontrap(s, p, b):
    # independent oracle: the same expansion evaluated without logs
    n = s * s
    total = 0.0
    for z in range(s, n + 1):
        inner = sum(
            math.comb(n, j) * p**j * (1 - p) ** (n - j) for j in range(1, z + 1)
        )
        total += (
            math.comb(s * (s - 1), z - s)
            * b
            * p**z
            * (1 - p) ** (n - z)
            * inner ** (b - 1)
        )
    return 1.0 - total


def test_max_count_nontrap_prob_small_cases():
    # S=1 collapses to 1 - B p^B by hand expansion
    for p in (0.0, 0.2, 0.5, 0.8):
        assert max_count_nontrap_prob(1, p, 2) == pytest.approx(1 - 2 * p * p, abs=1e-12)
    assert max_count_nontrap_prob(1, 0.5, 2) == pytest.approx(0.5)
    assert max_count_nontrap_prob(1, 0.0, 2) == 1.0
    # the printed expansion leaves [0, 1] at the p=1 corner; kept verbatim
    assert max_count_nontrap_prob(1, 1.0, 3) == pytest.approx(1.0 - 3.0)


def test_max_count_nontrap_prob_matches_direct_evaluation():
    for s, p, b in [(2, 0.4, 2), (3, 0.3, 2), (3, 0.5, 3), (4, 0.25, 3), (5, 0.35, 2)]:
        assert max_count_nontrap_prob(s, p, b) == pytest.approx(
            direct_max_count_nontrap(s, p, b), rel=1e-10
        )


def test_max_count_nontrap_prob_large_side_is_finite():
    # S^2 = 4096: the log-space path must not overflow
    value = max_count_nontrap_prob(64, 0.3, 3)
    assert math.isfinite(value)
    assert 0.0 <= value <= 1.0


def test_count_eval_error_prob():
    assert count_eval_error_prob(1, 0.5, 2) == pytest.approx(0.25)
    assert count_eval_error_prob(3, 0.0, 3) == 0.0
    assert count_eval_error_prob(3, 1.0, 3) == 0.0


def test_random_miss_prob_examples_and_identity():
    assert random_miss_prob(2, 0.25) == pytest.approx(0.1875, abs=1e-15)
    for b in range(2, 7):
        assert random_miss_prob(b, 0.0) == 0.0
        assert random_miss_prob(b, 1.0) == 0.0
        for pp in np.linspace(0.0, 1.0, 11):
            closed = random_miss_prob(b, float(pp))
            explicit = random_miss_prob_sum(b, float(pp))
            assert abs(closed - explicit) < 1e-12


def test_propagate_to_root_worked_example():
    trace = propagate_to_root(0.1875, 2, 2)
    assert trace.levels == ((2, 0.1875), (1, 0.03515625), (0, 0.0339202880859375))
    assert trace.root_error == 0.0339202880859375


def test_propagate_to_root_edges():
    assert propagate_to_root(0.0, 3, 6).root_error == 0.0
    assert propagate_to_root(0.25, 4, 0).levels == ((0, 0.25),)
    # tip error 1: the min step keeps 1, the first max step kills it
    trace = propagate_to_root(1.0, 3, 2)
    assert trace.levels == ((2, 1.0), (1, 1.0), (0, 0.0))
    with pytest.raises(ValueError):
        propagate_to_root(0.5, 3, 3)


def test_error_model_curve_frozen_values_and_growth():
    points = error_model_curve(3, 6, fair_p(3), (2, 4, 6, 8))
    frozen = {
        2: (81, 8.138080189047765e-115),
        4: (27, 5.978754856405914e-105),
        6: (9, 6.024676775770826e-84),
        8: (3, 5.359408089180791e-53),
    }
    for pt in points:
        side, root = frozen[pt.k]
        assert pt.side == side
        assert pt.root_error == pytest.approx(root, rel=1e-10)
    roots = [pt.root_error for pt in points]
    assert all(a < b for a, b in zip(roots, roots[1:]))  # grows with k


def test_p0_curve_edges():
    assert all(r == 0.0 for _, r in p0_curve(3, 6, 0.0, (2, 4, 6)))
    ((k0, r0),) = p0_curve(3, 6, 0.3, (0,))
    assert k0 == 0
    assert r0 == pytest.approx(random_miss_prob(3, row_trap_prob(model_side(3, 6, 0), 0.3)))


def exact_conditional_nontrap_max(s, p, b):
    # enumerate all S x S boards once; exact value of the MC estimand
    n = s * s
    boards = np.array(
        [[(cfg >> i) & 1 for i in range(n)] for cfg in range(2**n)], dtype=np.int8
    ).reshape(-1, s, s)
    weight = p ** boards.sum(axis=(1, 2)) * (1 - p) ** (n - boards.sum(axis=(1, 2)))
    counts = boards.sum(axis=(1, 2))
    trap = boards.all(axis=2).any(axis=1)
    if b != 2:
        raise NotImplementedError
    w_pair = np.outer(weight, weight)
    any_trap = trap[:, None] | trap[None, :]
    strict_hi = counts[:, None] > counts[None, :]
    nontrap_max = (strict_hi & ~trap[:, None]) | (strict_hi.T & ~trap[None, :])
    return (w_pair * (any_trap & nontrap_max)).sum() / (w_pair * any_trap).sum()


def test_mc_max_count_nontrap_against_enumeration():
    for s, p in ((2, 0.4), (3, 0.35)):
        exact = exact_conditional_nontrap_max(s, p, 2)
        mc = mc_max_count_nontrap(s, p, 2, 60000, 31)
        sigma = max(mc.stderr, 1e-9)
        assert abs(mc.estimate - exact) < 4 * sigma
        assert mc.n_conditioned > 0


def test_mc_max_count_nontrap_edges():
    empty = mc_max_count_nontrap(2, 0.0, 2, 2000, 1)
    assert math.isnan(empty.estimate) and empty.n_conditioned == 0
    sure = mc_max_count_nontrap(2, 1.0, 2, 2000, 1)
    assert sure.estimate == 0.0  # every board is a trap, every trial ties
    assert sure.n_ties == sure.n_conditioned == 2000


def test_mc_propagate_k0_matches_single_max_step():
    estimate, stderr = mc_propagate(3, 0.2, 0, 400000, 17)
    assert abs(estimate - random_miss_prob(3, 0.2)) < 4 * stderr


def test_mc_propagate_worked_chain():
    # trap marks at 0.25 give tip error 0.1875 and root 0.0339202880859375
    estimate, stderr = mc_propagate(2, 0.25, 2, 400000, 23)
    target = propagate_to_root(random_miss_prob(2, 0.25), 2, 2).root_error
    assert target == 0.0339202880859375
    assert abs(estimate - target) < 4 * stderr


def test_mc_propagate_zero():
    estimate, _ = mc_propagate(2, 0.0, 2, 5000, 3)
    assert estimate == 0.0


@given(st.integers(1, 12), st.floats(0.0, 1.0))
@settings(max_examples=80, deadline=None)
def test_row_trap_prob_in_unit_interval(s, p):
    assert 0.0 <= row_trap_prob(s, p) <= 1.0


@given(st.integers(2, 8), st.floats(0.0, 1.0), st.integers(0, 4))
@settings(max_examples=80, deadline=None)
def test_propagation_stays_in_unit_interval(b, tip, half_k):
    trace = propagate_to_root(tip, b, 2 * half_k)
    assert all(0.0 <= x <= 1.0 for _, x in trace.levels)


@given(st.integers(2, 8), st.floats(0.0, 1.0))
@settings(max_examples=80, deadline=None)
def test_random_miss_identity_property(b, trap_p):
    assert random_miss_prob(b, trap_p) == pytest.approx(
        random_miss_prob_sum(b, trap_p), abs=1e-12
    )
