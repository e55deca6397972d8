import itertools
import math
import pickle
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairstream.core import ContractViolation
from fairstream.harness.synthetic import random_coverage, random_cut, random_facility, random_kernel
from fairstream.objectives import (
    Coverage,
    DirectedCut,
    FacilityLocation,
    LogDet,
    MovieUtility,
    Nullifier,
    SetFunction,
    StaleCacheError,
    minimal_logdet_shift,
    verify_submodularity,
)


def all_subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


def small_objectives(seed):
    rng = np.random.default_rng(seed)
    users = rng.random(3)
    movies = rng.random((6, 3))
    return {
        "coverage": random_coverage(6, 10, 0.3, seed),
        "facility": random_facility(6, 2, seed),
        "logdet": random_kernel(6, 3, seed),
        "logdet_min_shift": random_kernel(6, 3, seed, minimal_shift=True),
        "movie": MovieUtility(users, movies),
        "cut": random_cut(6, 0.3, seed),
        "nullifier": Nullifier(6, {0, 1}, 5),
    }


# --- evaluate --------------------------------------------------------------

def test_coverage_union():
    f = Coverage([{1, 2}, {2, 3}])
    assert f.evaluate([0, 1]) == 3
    assert f.evaluate([]) == 0


def test_logdet_identity_singleton():
    f = LogDet(np.eye(2), epsilon=0.1)
    assert f.gamma == 0
    assert f.evaluate([0]) == pytest.approx(math.log(1.1))
    assert f.evaluate([0]) == pytest.approx(0.0953, abs=1e-4)


def test_nullifier_example():
    a1, b1, b2, x = 0, 1, 2, 3
    f = Nullifier(4, {a1}, x)
    assert f.evaluate([a1, b1, x]) == 1
    assert f.evaluate([a1, b1, b2]) == 3


def test_out_of_range_element():
    f = Coverage([{1}, {2}])
    with pytest.raises(ContractViolation):
        f.evaluate([2])


def test_nullifier_formula_exhaustive():
    n = 10
    A, x = {0, 1, 2, 3}, 9
    f = Nullifier(n, A, x)
    for S in all_subsets(n):
        S = set(S)
        expected = len(S & A) if x in S else len(S)
        assert f.value(S) == expected


# --- marginal gains and call counting --------------------------------------

def test_marginal_gain_call_accounting():
    f = Coverage([{1, 2}, {2, 3}])
    assert f.marginal_gain(0, [], cached_fS=0) == 2
    assert f.call_count == 1
    assert f.marginal_gain(1, [0], cached_fS=2) == 1
    assert f.call_count == 2
    assert f.marginal_gain(1, [0]) == 1
    assert f.call_count == 4
    f.reset_count()
    assert f.call_count == 0


def test_cut_marginals_go_negative():
    f = DirectedCut(2, [(0, 1)])
    assert f.marginal_gain(0, [], cached_fS=0) == 1
    assert f.marginal_gain(1, [0], cached_fS=1) == -1


def test_stale_cache_detected_in_debug_mode():
    f = Coverage([{1, 2}, {2, 3}])
    f.debug = True
    with pytest.raises(StaleCacheError):
        f.marginal_gain(1, [0], cached_fS=5)
    # the check itself is not counted
    assert f.call_count == 0


def test_value_is_uncounted():
    f = Coverage([{1}])
    f.value([0])
    assert f.call_count == 0


def test_counter_exact_under_threads():
    f = Coverage([{i} for i in range(5)])

    def work():
        for _ in range(500):
            f.evaluate([0, 1])

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert f.call_count == 4000


def test_fork_and_pickle_keep_data_reset_counter():
    f = random_coverage(5, 8, 0.4, 1)
    f.evaluate([0])
    g = f.fork()
    h = pickle.loads(pickle.dumps(f))
    assert g.call_count == 0
    assert h.value([0, 1, 2]) == f.value([0, 1, 2])
    g.evaluate([1])
    assert f.call_count == 1


# --- submodularity verifier ------------------------------------------------

def test_verify_coverage_clean():
    report = verify_submodularity(random_coverage(12, 20, 0.25, 3), trials=1000, seed=0)
    assert report.checks == 1000
    assert report.submodular


def test_verify_logdet_exhaustive():
    report = verify_submodularity(random_kernel(6, 3, 4), exhaustive=True, tolerance=1e-9)
    assert report.submodular


def test_verify_detects_supermodular():
    report = verify_submodularity(SetFunction(6, lambda S: len(S) ** 2), trials=200, seed=0)
    assert report.violations > 0
    assert not report.submodular


@pytest.mark.parametrize("seed", range(3))
def test_all_objectives_submodular_exhaustive(seed):
    for name, f in small_objectives(seed).items():
        assert verify_submodularity(f, exhaustive=True).submodular, name


def test_all_objectives_submodular_sampled():
    rng = np.random.default_rng(11)
    objectives = {
        "coverage": random_coverage(20, 40, 0.15, 1),
        "facility": random_facility(20, 3, 2),
        "logdet": random_kernel(14, 4, 3),
        "movie": MovieUtility(rng.random(4), rng.random((20, 4))),
        "cut": random_cut(20, 0.2, 5),
    }
    for name, f in objectives.items():
        assert verify_submodularity(f, trials=10_000, seed=0).submodular, name


def test_monotone_families():
    for seed in range(3):
        fs = small_objectives(seed)
        for name in ("coverage", "facility", "movie"):
            assert verify_submodularity(fs[name], exhaustive=True).monotone, name


def test_non_monotone_witnesses():
    for seed in range(3):
        fs = small_objectives(seed)
        assert not verify_submodularity(fs["cut"], exhaustive=True).monotone
        assert not verify_submodularity(fs["logdet_min_shift"], exhaustive=True).monotone


def test_eigenvalue_shift_makes_logdet_monotone():
    # the interlacing bound behind the shift also bounds every marginal from below
    for seed in range(5):
        f = random_kernel(6, 3, seed, scale=4.0)
        assert verify_submodularity(f, exhaustive=True).monotone


# --- family specifics ------------------------------------------------------

@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.permutations(range(5)))
def test_logdet_order_independent_and_nonnegative(seed, perm):
    f = random_kernel(5, 2, seed)
    assert f.value(perm) == pytest.approx(f.value(sorted(perm)), abs=1e-10)
    for S in all_subsets(5):
        if S:
            assert f.value(S) >= -1e-12


def test_minimal_shift_is_tight_and_sufficient():
    L = np.array([[3.0, 2.5], [2.5, 3.0]])
    gamma = minimal_logdet_shift(L, epsilon=0.0)
    assert gamma == 0.0
    f = LogDet(L, epsilon=0.0, gamma=gamma)
    assert f.value([0]) > f.value([0, 1]) > 0
    L2 = np.array([[0.5, 0.0], [0.0, 2.0]])
    g = LogDet(L2, epsilon=0.0, gamma=minimal_logdet_shift(L2, 0.0))
    assert g.value([0]) == pytest.approx(0.0, abs=1e-12)


def test_facility_location_shift_and_normalization():
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
    f = FacilityLocation(X)
    assert f.shift == 3 * 5.0
    assert f.value([]) == 0
    # records are the candidates themselves: cost of {0} is 0 + 1 + 4
    assert f.value([0]) == 15 - 5
    for S in all_subsets(3):
        assert f.value(S) >= 0
    with pytest.raises(ContractViolation):
        FacilityLocation(X, shift=1.0)


def test_movie_utility_terms():
    w = np.array([1.0, 0.0])
    V = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    f = MovieUtility(w, V, alpha=0.5)
    assert f.value([]) == 0
    # coverage term: max over S of <v_m, v_m'> for m' in {0,1,2} with S={0}: 1, 0, 1
    assert f.value([0]) == pytest.approx(0.5 * 2 + 0.5 * 1)
    assert f.value([2]) == pytest.approx(0.5 * (1 + 1 + 2) + 0.5 * 1)


def test_cut_counts_leaving_arcs():
    f = DirectedCut(3, [(0, 1), (1, 2), (2, 0), (0, 2)])
    assert f.value([0]) == 2
    assert f.value([0, 1]) == 2
    assert f.value([0, 1, 2]) == 0
