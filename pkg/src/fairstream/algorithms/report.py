from __future__ import annotations

import time
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from fairstream.core import FairnessSpec, GroundSet, cardinality_overflow, fairness_error
from fairstream.objectives import Objective


@dataclass
class RunReport:
    algorithm: str
    solution: tuple[int, ...]
    objective: float
    err: int
    overflow: int
    oracle_calls: int
    peak_stored_elements: int
    inner_size: int
    wall_time: float
    k: int
    seed: int | None = None
    error: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.solution)

    @property
    def feasible(self) -> bool:
        return self.error is None and self.err == 0 and self.overflow == 0


class RunClock:
    """Tracks wall time and the oracle-call delta of one run."""

    def __init__(self, oracle: Objective):
        self.oracle = oracle
        self.calls_before = oracle.call_count
        self.start = time.perf_counter()

    def finish(
        self,
        algorithm: str,
        solution: Iterable[int],
        ground: GroundSet,
        spec: FairnessSpec,
        peak: int,
        inner_size: int,
        seed: int | None = None,
        **extra,
    ) -> RunReport:
        elapsed = time.perf_counter() - self.start
        calls = self.oracle.call_count - self.calls_before
        solution = tuple(sorted(int(e) for e in solution))
        counts = ground.counts(solution)
        return RunReport(
            algorithm=algorithm,
            solution=solution,
            objective=self.oracle.value(solution),
            err=fairness_error(counts, spec),
            overflow=cardinality_overflow(counts, spec),
            oracle_calls=calls,
            peak_stored_elements=peak,
            inner_size=inner_size,
            wall_time=elapsed,
            k=spec.k,
            seed=seed,
            extra=extra,
        )


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def split_rng(seed, count: int) -> list[np.random.Generator]:
    """Independent child generators derived from one seed."""
    if isinstance(seed, np.random.Generator):
        return list(seed.spawn(count))
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def rescore(report: RunReport, ground: GroundSet, spec: FairnessSpec) -> RunReport:
    """Recompute ``err``/overflow of a report against a different spec."""
    counts = ground.counts(report.solution)
    report.err = fairness_error(counts, spec)
    report.overflow = cardinality_overflow(counts, spec)
    report.k = spec.k
    return report
