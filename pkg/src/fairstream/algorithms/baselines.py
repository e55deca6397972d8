"""Comparison algorithms: unconstrained and partially constrained baselines."""

from __future__ import annotations

import math
from collections.abc import Iterable

from fairstream.algorithms.backup import BackupSets
from fairstream.algorithms.greedy import greedy
from fairstream.algorithms.matroid import FeldmanKarbasiKazemi
from fairstream.algorithms.report import RunClock, RunReport, make_rng, split_rng
from fairstream.core import ExtendabilityTracker, FairnessSpec, GroundSet, check_instance
from fairstream.objectives import Objective


def sieve_streaming(
    stream: Iterable[int],
    oracle: Objective,
    ground: GroundSet,
    spec: FairnessSpec,
    epsilon: float = 0.05,
) -> RunReport:
    """Threshold sieve for ``|S| <= k`` only; ``spec`` is used just to measure ``err``.

    Keeps one candidate set per threshold ``v = (1+eps)^i`` with
    ``m <= v <= 2km``, where ``m`` is the best singleton seen so far, and
    adds ``e`` to ``S_v`` when ``f(e|S_v) >= (v/2 - f(S_v)) / (k - |S_v|)``.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    clock = RunClock(oracle)
    k = spec.k
    base = math.log1p(epsilon)
    sets: dict[int, tuple[list[int], float]] = {}
    best_single = 0.0
    peak = 0
    for e in stream:
        if k == 0:
            break
        single = oracle.evaluate([e])
        best_single = max(best_single, single)
        if best_single <= 0:
            continue
        lo = math.ceil(math.log(best_single) / base - 1e-9)
        hi = math.floor(math.log(2 * k * best_single) / base + 1e-9)
        for i in [i for i in sets if i < lo]:
            del sets[i]
        for i in range(lo, hi + 1):
            sets.setdefault(i, ([], 0.0))
        for i in sorted(sets):
            S, f_S = sets[i]
            if len(S) >= k:
                continue
            f_Se = single if not S else oracle.evaluate(S + [e])
            threshold = ((1 + epsilon) ** i / 2 - f_S) / (k - len(S))
            if f_Se - f_S >= threshold:
                S.append(e)
                sets[i] = (S, f_Se)
        peak = max(peak, sum(len(S) for S, _ in sets.values()))
    best: list[int] = []
    best_value = -math.inf
    for i in sorted(sets):
        S, f_S = sets[i]
        if f_S > best_value:
            best, best_value = S, f_S
    return clock.finish("sieve", best, ground, spec, peak, len(best), thresholds=len(sets))


def random_subset(
    stream: Iterable[int], oracle: Objective, ground: GroundSet, spec: FairnessSpec, seed=None
) -> RunReport:
    """Uniform reservoir sample of ``k`` elements, ignoring colors."""
    clock = RunClock(oracle)
    rng = make_rng(seed)
    k = spec.k
    sample: list[int] = []
    seen = 0
    for e in stream:
        seen += 1
        if len(sample) < k:
            sample.append(e)
        elif k:
            j = int(rng.integers(seen))
            if j < k:
                sample[j] = e
    return clock.finish("random", sample, ground, spec, len(sample), len(sample), seed)


def fair_random(
    stream: Iterable[int], oracle: Objective, ground: GroundSet, spec: FairnessSpec, seed=None
) -> RunReport:
    """Random feasible set: per-color reservoirs of ``lower[c]`` plus a reservoir
    over the remaining budget, the latter filtered through the upper bounds."""
    check_instance(spec, ground)
    clock = RunClock(oracle)
    lower_rng, fill_rng = split_rng(seed, 2)
    colors = ground.colors
    backups = BackupSets(spec.lower, mode="reservoir", rng=lower_rng)
    budget = spec.k - sum(spec.lower)
    fill = BackupSets([budget], mode="reservoir", rng=fill_rng)
    for e in stream:
        backups.offer(colors[e], e)
        fill.offer(0, e)
    tracker = ExtendabilityTracker(spec)
    solution = []
    for buf in backups.buffers:
        for e in buf:
            tracker.update(colors[e])
            solution.append(e)
    chosen = set(solution)
    for e in fill.buffers[0]:
        if e not in chosen and tracker.candidate(colors[e]):
            tracker.update(colors[e])
            solution.append(e)
            chosen.add(e)
    peak = len(backups) + len(fill)
    return clock.finish("fair-random", solution, ground, spec, peak, len(solution), seed)


def matroid_constraints(
    stream: Iterable[int],
    oracle: Objective,
    ground: GroundSet,
    spec: FairnessSpec,
    seed=None,
    variant: str = "practical",
    subsample: bool = False,
) -> RunReport:
    """FKK under the upper bounds and ``k`` only; lower bounds are ignored."""
    clock = RunClock(oracle)
    tracker = ExtendabilityTracker(spec.without_lower_bounds())
    algo = FeldmanKarbasiKazemi(
        oracle, ground, tracker, rng=make_rng(seed) if subsample else None,
        variant=variant, subsample=subsample,
    )
    peak = 0
    for e in stream:
        algo.process(e)
        peak = max(peak, len(algo))
    solution = algo.solution
    name = "matroid-cons" + ("-nonmono" if subsample else "")
    return clock.finish(name, solution, ground, spec, peak, len(solution), seed)


def baselines(
    which: str,
    stream: Iterable[int],
    oracle: Objective,
    ground: GroundSet,
    spec: FairnessSpec,
    seed=None,
) -> RunReport:
    if which == "random":
        return random_subset(stream, oracle, ground, spec, seed)
    if which == "fair_random":
        return fair_random(stream, oracle, ground, spec, seed)
    if which == "matroid_constraints":
        return matroid_constraints(stream, oracle, ground, spec, seed)
    if which == "greedy":
        return greedy(oracle, ground, spec)
    raise ValueError(f"unknown baseline {which!r}")
