"""Streaming and offline maximization algorithms, plus a name registry."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from functools import partial

from fairstream.algorithms.backup import BackupSets, augment, reservoir_insert
from fairstream.algorithms.baselines import (
    baselines,
    fair_random,
    matroid_constraints,
    random_subset,
    sieve_streaming,
)
from fairstream.algorithms.greedy import fair_greedy, greedy
from fairstream.algorithms.matroid import ChakrabartiKale, FeldmanKarbasiKazemi
from fairstream.algorithms.report import RunReport
from fairstream.algorithms.streaming import fair_streaming_monotone, fair_streaming_nonmonotone


@dataclass(frozen=True)
class AlgorithmInfo:
    name: str
    run: Callable  # (stream, oracle, ground, spec, seed) -> RunReport
    randomized: bool
    streaming: bool
    fair: bool


def _offline(fn):
    return lambda stream, oracle, ground, spec, seed=None: fn(oracle, ground, spec)


def _seedless(fn, **kw):
    return lambda stream, oracle, ground, spec, seed=None: fn(stream, oracle, ground, spec, **kw)


ALGORITHMS: dict[str, AlgorithmInfo] = {
    info.name: info
    for info in [
        AlgorithmInfo("fair-ck", _seedless(fair_streaming_monotone, inner="ck"), False, True, True),
        AlgorithmInfo(
            "fair-ck-theory",
            _seedless(fair_streaming_monotone, inner="ck", variant="theory"), False, True, True,
        ),
        AlgorithmInfo("fair-fkk", _seedless(fair_streaming_monotone, inner="fkk"), False, True, True),
        AlgorithmInfo("fair-nonmono-fkk", fair_streaming_nonmonotone, True, True, True),
        AlgorithmInfo(
            "fair-nonmono-fkk-theory",
            partial(fair_streaming_nonmonotone, variant="theory"), True, True, True,
        ),
        AlgorithmInfo("fair-greedy", _offline(fair_greedy), False, False, True),
        AlgorithmInfo("fair-random", fair_random, True, True, True),
        AlgorithmInfo("greedy", _offline(greedy), False, False, False),
        AlgorithmInfo("sieve", _seedless(sieve_streaming), False, True, False),
        AlgorithmInfo("random", random_subset, True, True, False),
        AlgorithmInfo("matroid-cons", matroid_constraints, False, True, False),
        AlgorithmInfo(
            "matroid-cons-nonmono", partial(matroid_constraints, subsample=True), True, True, False,
        ),
    ]
}


def get_algorithm(name: str) -> AlgorithmInfo:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {name!r}; choose from {', '.join(sorted(ALGORITHMS))}"
        ) from None


__all__ = [
    "ALGORITHMS",
    "AlgorithmInfo",
    "BackupSets",
    "ChakrabartiKale",
    "FeldmanKarbasiKazemi",
    "RunReport",
    "augment",
    "baselines",
    "fair_greedy",
    "fair_random",
    "fair_streaming_monotone",
    "fair_streaming_nonmonotone",
    "get_algorithm",
    "greedy",
    "matroid_constraints",
    "random_subset",
    "reservoir_insert",
    "sieve_streaming",
]
