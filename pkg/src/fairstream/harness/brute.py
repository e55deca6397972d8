"""Exact optimum over the feasible family by enumeration."""

from __future__ import annotations

import math

from fairstream.core import (
    ExtendabilityTracker,
    FairnessSpec,
    GroundSet,
    check_instance,
    is_feasible,
)
from fairstream.objectives import Objective

DEFAULT_CAP = 20


class BruteForceCapError(RuntimeError):
    """The instance is too large to enumerate."""


def _check_cap(ground, max_n):
    if ground.n > max_n:
        raise BruteForceCapError(
            f"brute force refuses n={ground.n} elements (cap is {max_n})"
        )


def brute_force_opt(
    oracle: Objective, ground: GroundSet, spec: FairnessSpec, max_n: int = DEFAULT_CAP
) -> tuple[float, tuple[int, ...]]:
    """Best value over all feasible sets and the lexicographically smallest witness.

    Depth-first over sorted subsets, never descending below a set that is
    not extendable.  Uses the uncounted ``value`` path of the oracle.
    """
    _check_cap(ground, max_n)
    check_instance(spec, ground)
    colors = ground.colors
    n = ground.n
    tracker = ExtendabilityTracker(spec)
    S: list[int] = []
    best_value = -math.inf
    best_set: tuple[int, ...] = ()

    def visit(start):
        nonlocal best_value, best_set
        if is_feasible(tracker.t, spec):
            value = oracle.value(S)
            if value > best_value:
                best_value, best_set = value, tuple(S)
        for e in range(start, n):
            c = colors[e]
            if tracker.candidate(c):
                tracker.update(c)
                S.append(e)
                visit(e + 1)
                S.pop()
                tracker.remove(c)

    visit(0)
    return best_value, best_set


def brute_force_opt_unpruned(
    oracle: Objective, ground: GroundSet, spec: FairnessSpec, max_n: int = 16
) -> tuple[float, tuple[int, ...]]:
    """Same contract as :func:`brute_force_opt` but scans all ``2^n`` subsets."""
    _check_cap(ground, max_n)
    best_value = -math.inf
    best_set: tuple[int, ...] = ()
    for mask in range(1 << ground.n):
        S = tuple(e for e in range(ground.n) if mask >> e & 1)
        if not is_feasible(ground.counts(S), spec):
            continue
        value = oracle.value(S)
        if value > best_value or (value == best_value and S < best_set):
            best_value, best_set = value, S
    return best_value, best_set
