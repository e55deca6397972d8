from __future__ import annotations

from fairstream.algorithms.report import RunClock, RunReport, rescore
from fairstream.core import (
    ExtendabilityTracker,
    FairnessSpec,
    GroundSet,
    check_instance,
    max_feasible_size,
)
from fairstream.objectives import Objective


def fair_greedy(
    oracle: Objective, ground: GroundSet, spec: FairnessSpec, name: str = "fair-greedy"
) -> RunReport:
    """Offline greedy over the extendable sets; a 1/2-approximation for monotone ``f``.

    Each round evaluates ``f(S + e)`` for every element that keeps ``S``
    extendable (``f(S)`` is cached) and takes the best, ties to the smallest
    id.  Stops once ``S`` is a basis, which is then a feasible set.
    """
    check_instance(spec, ground)
    clock = RunClock(oracle)
    tracker = ExtendabilityTracker(spec)
    colors = ground.colors
    target = max_feasible_size(spec, ground)
    S: list[int] = []
    in_S = [False] * ground.n
    f_S = 0.0
    while len(S) < target:
        best = None
        best_value = 0.0
        for e in range(ground.n):
            if in_S[e] or not tracker.candidate(colors[e]):
                continue
            value = oracle.evaluate(S + [e])
            if best is None or value > best_value:
                best, best_value = e, value
        if best is None:
            break
        tracker.update(colors[best])
        S.append(best)
        in_S[best] = True
        f_S = best_value
    return clock.finish(name, S, ground, spec, peak=ground.n, inner_size=len(S), f_S=f_S)


def greedy(oracle: Objective, ground: GroundSet, spec: FairnessSpec) -> RunReport:
    """Plain cardinality-constrained greedy; the report still measures ``err`` against ``spec``."""
    relaxed = FairnessSpec.cardinality_only(ground.num_colors, spec.k)
    report = fair_greedy(oracle, ground, relaxed, name="greedy")
    return rescore(report, ground, spec)

