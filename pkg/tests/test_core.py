import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairstream.core import (
    ContractViolation,
    ExtendabilityTracker,
    FairnessSpec,
    GroundSet,
    InfeasibleInstanceError,
    cardinality_overflow,
    check_instance,
    excess_ratio,
    fairness_error,
    is_extendable,
    is_feasible,
    max_feasible_size,
)


def has_feasible_completion(counts, sizes, spec):
    """Oracle: search every count vector that dominates ``counts`` for a feasible one."""
    ranges = [range(t, s + 1) for t, s in zip(counts, sizes)]
    return any(is_feasible(list(full), spec) for full in itertools.product(*ranges))


def tracker_at(spec, counts):
    tr = ExtendabilityTracker(spec)
    for c, t in enumerate(counts):
        for _ in range(t):
            tr.t[c] += 1
            tr.size += 1
            if tr.t[c] > spec.lower[c]:
                tr.Q += 1
    return tr


@st.composite
def instances(draw, max_n=12, max_colors=4):
    C = draw(st.integers(1, max_colors))
    sizes = draw(st.lists(st.integers(0, max(1, max_n // C)), min_size=C, max_size=C))
    lower = [draw(st.integers(0, s)) for s in sizes]
    upper = [draw(st.integers(lo, max(lo, s))) for lo, s in zip(lower, sizes)]
    k = draw(st.integers(sum(lower), max(sum(lower), sum(sizes))))
    return sizes, FairnessSpec(tuple(lower), tuple(upper), k)


# --- spec examples ---------------------------------------------------------

def test_is_feasible_examples():
    spec = FairnessSpec((1, 1), (2, 2), 2)
    assert is_feasible([1, 1], spec)
    spec3 = FairnessSpec((1, 1), (2, 2), 3)
    assert not is_feasible([0, 2], spec3)
    assert not is_feasible([2, 2], spec3)


def test_length_mismatch_is_contract_violation():
    spec = FairnessSpec((1, 1), (2, 2), 2)
    for fn in (is_feasible, is_extendable, fairness_error):
        with pytest.raises(ContractViolation):
            fn([1], spec)


def test_is_extendable_examples():
    spec = FairnessSpec((1, 1), (2, 2), 2)
    assert is_extendable([1, 0], spec)
    assert not is_extendable([2, 0], spec)
    assert is_extendable([0, 0], spec)
    # brute-force agreement for the negative example
    assert not has_feasible_completion([2, 0], [5, 5], spec)


def test_spec_rejects_infeasible_bounds():
    with pytest.raises(InfeasibleInstanceError, match=r"sum\(lower\) <= k"):
        FairnessSpec((2, 2), (3, 3), 3)
    with pytest.raises(InfeasibleInstanceError):
        FairnessSpec((2,), (1,), 3)
    with pytest.raises(ContractViolation):
        FairnessSpec((0, 0), (1,), 3)


def test_check_instance_rejects_lower_above_color_size():
    ground = GroundSet((0, 0, 1))
    with pytest.raises(InfeasibleInstanceError):
        check_instance(FairnessSpec((0, 2), (1, 2), 3), ground)
    check_instance(FairnessSpec((2, 1), (2, 1), 3), ground)


def test_tracker_candidate_examples():
    spec = FairnessSpec((1, 1), (2, 2), 2)
    tr = ExtendabilityTracker(spec)
    tr.update(0)
    assert (tr.t, tr.Q) == ([1, 0], 2)
    assert not tr.candidate(0)
    assert tr.candidate(1)
    sat = tracker_at(FairnessSpec((0, 0), (1, 3), 3), [1, 0])
    assert not sat.candidate(0)


def test_tracker_update_examples():
    spec = FairnessSpec((1, 0), (3, 3), 3)
    tr = tracker_at(spec, [0, 1])
    assert tr.Q == 2
    tr.update(0)
    assert (tr.t[0], tr.Q) == (1, 2)
    tr.update(0)
    assert (tr.t[0], tr.Q) == (2, 3)


def test_tracker_update_rejects_non_extendable():
    tr = tracker_at(FairnessSpec((1, 1), (2, 2), 2), [1, 0])
    with pytest.raises(ContractViolation):
        tr.update(0)


def test_tracker_swap_examples():
    spec = FairnessSpec((0, 1), (2, 2), 2)
    tr = tracker_at(spec, [1, 1])
    assert tr.Q == 2
    assert tr.can_swap(1, 1)
    assert not tr.can_swap(0, 1)
    assert not has_feasible_completion([2, 0], [3, 3], spec)
    full = tracker_at(FairnessSpec((0, 0), (1, 2), 3), [1, 1])
    assert not full.can_swap(0, 1)


def test_excess_ratio_examples():
    ground = GroundSet((0,) * 10 + (1,) * 4)
    assert excess_ratio(FairnessSpec((1, 2), (10, 4), 5), ground) == Fraction(1, 2)
    assert excess_ratio(FairnessSpec((0, 0), (3, 3), 3), ground) == 1
    assert excess_ratio(FairnessSpec((0, 4), (4, 4), 4), ground) == 0


def test_excess_ratio_empty_color():
    ground = GroundSet((0, 0), num_colors=2)
    with pytest.raises(InfeasibleInstanceError):
        excess_ratio(FairnessSpec((0, 1), (2, 1), 2), ground)


def test_fairness_error_examples():
    spec = FairnessSpec((2, 1), (3, 2), 5)
    assert fairness_error([1, 3], spec) == 2
    assert fairness_error([2, 2], spec) == 0
    assert fairness_error([0, 0], spec) == 3


def test_overflow_is_reported_separately():
    spec = FairnessSpec((0, 0), (3, 3), 2)
    assert fairness_error([2, 1], spec) == 0
    assert cardinality_overflow([2, 1], spec) == 1


def test_ground_set_counts():
    g = GroundSet((1, 0, 1, 2))
    assert g.color_sizes == (1, 2, 1)
    assert g.counts([0, 2, 3]) == [0, 2, 1]
    assert g.members(1) == [0, 2]
    with pytest.raises(ContractViolation):
        GroundSet((0, 3), num_colors=2)


def test_max_feasible_size():
    g = GroundSet((0, 0, 0, 1))
    assert max_feasible_size(FairnessSpec((0, 0), (2, 5), 10), g) == 3
    assert max_feasible_size(FairnessSpec((0, 0), (3, 1), 2), g) == 2


# --- properties ------------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(instances())
def test_observation_matches_superset_search(inst):
    sizes, spec = inst
    for counts in itertools.product(*[range(s + 1) for s in sizes]):
        assert is_extendable(list(counts), spec) == has_feasible_completion(counts, sizes, spec)


@settings(max_examples=200, deadline=None)
@given(instances(), st.lists(st.integers(0, 3), max_size=20))
def test_tracker_follows_predicate(inst, moves):
    sizes, spec = inst
    tr = ExtendabilityTracker(spec)
    for m in moves:
        c = m % spec.num_colors
        for col in range(spec.num_colors):
            nxt = list(tr.t)
            nxt[col] += 1
            assert tr.candidate(col) == is_extendable(nxt, spec)
        if tr.candidate(c):
            tr.update(c)
            assert tr.is_consistent()
            assert is_extendable(tr.t, spec)


@settings(max_examples=300, deadline=None)
@given(instances())
def test_swap_matches_predicate(inst):
    sizes, spec = inst
    C = spec.num_colors
    for counts in itertools.product(*[range(s + 1) for s in sizes]):
        if not is_extendable(list(counts), spec):
            continue
        tr = tracker_at(spec, counts)
        for c_in in range(C):
            for c_out in range(C):
                if counts[c_out] == 0:
                    continue
                nxt = list(counts)
                nxt[c_out] -= 1
                nxt[c_in] += 1
                assert tr.can_swap(c_in, c_out) == is_extendable(nxt, spec)


@settings(max_examples=200, deadline=None)
@given(instances(), st.data())
def test_error_zero_iff_bounds_hold(inst, data):
    sizes, spec = inst
    counts = [data.draw(st.integers(0, s)) for s in sizes]
    err = fairness_error(counts, spec)
    in_bounds = all(lo <= t <= hi for t, lo, hi in zip(counts, spec.lower, spec.upper))
    assert (err == 0) == in_bounds
    assert (err == 0 and sum(counts) <= spec.k) == is_feasible(counts, spec)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 8), min_size=1, max_size=4), st.data())
def test_excess_ratio_monotonicity(sizes, data):
    lower = [data.draw(st.integers(0, s)) for s in sizes]
    c = data.draw(st.integers(0, len(sizes) - 1))
    g = GroundSet(tuple(col for col, s in enumerate(sizes) for _ in range(s)))
    spec = FairnessSpec(tuple(lower), tuple(sizes), sum(sizes))
    q = excess_ratio(spec, g)
    assert 0 <= q <= 1
    if lower[c] < sizes[c]:
        bumped = list(lower)
        bumped[c] += 1
        assert excess_ratio(FairnessSpec(tuple(bumped), tuple(sizes), sum(sizes)), g) <= q
    grown = GroundSet(g.colors + (c,))
    up = list(sizes)
    up[c] += 1
    assert excess_ratio(FairnessSpec(tuple(lower), tuple(up), sum(up)), grown) >= q


def _random_instances(n_max, count, seed):
    import numpy as np

    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, n_max + 1))
        C = int(rng.integers(1, 4))
        colors = tuple(int(x) for x in rng.integers(0, C, size=n))
        g = GroundSet(colors, C)
        lower = [int(rng.integers(0, s + 1)) for s in g.color_sizes]
        upper = [int(rng.integers(lo, s + 1)) for lo, s in zip(lower, g.color_sizes)]
        k = int(rng.integers(sum(lower), max(sum(lower), n) + 1))
        yield g, FairnessSpec(tuple(lower), tuple(upper), k)


def test_extendable_sets_form_a_matroid():
    for g, spec in _random_instances(8, 40, seed=7):
        family = [
            frozenset(S)
            for r in range(g.n + 1)
            for S in itertools.combinations(range(g.n), r)
            if is_extendable(g.counts(S), spec)
        ]
        members = set(family)
        assert frozenset() in members
        for S in family:
            for e in S:
                assert S - {e} in members
        for A in family:
            for B in family:
                if len(A) < len(B):
                    assert any(A | {e} in members for e in B - A)
