"""Sweeps over (algorithm, k, seed) cells."""

from __future__ import annotations

import math
import statistics
import warnings
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from fairstream.algorithms import RunReport, get_algorithm
from fairstream.core import FairnessSpec, GroundSet
from fairstream.objectives import Objective

OrderPolicy = Callable[[int, int], Sequence[int]]


def natural_order(n: int, seed: int) -> list[int]:
    return list(range(n))


def shuffled_order(n: int, seed: int) -> list[int]:
    return np.random.default_rng(seed).permutation(n).tolist()


def reversed_order(n: int, seed: int) -> list[int]:
    return list(range(n - 1, -1, -1))


def elements_last(*last: int) -> OrderPolicy:
    """Seeded shuffle with the given elements moved to the end (adversarial orders)."""

    def policy(n, seed):
        tail = [e for e in last if e < n]
        head = [e for e in shuffled_order(n, seed) if e not in set(tail)]
        return head + tail

    return policy


ORDER_POLICIES: dict[str, OrderPolicy] = {
    "natural": natural_order,
    "shuffled": shuffled_order,
    "reversed": reversed_order,
}


@dataclass
class ExperimentConfig:
    oracle: Objective
    ground: GroundSet
    #: a fixed spec, or a recipe mapping ``k`` to a spec
    bounds: FairnessSpec | Callable[[int], FairnessSpec]
    algorithms: Sequence[str]
    ks: Sequence[int]
    seeds: Sequence[int] = (0,)
    order: str | OrderPolicy = "shuffled"
    jobs: int = 1

    def __post_init__(self):
        for name in self.algorithms:
            get_algorithm(name)
        if any(k <= 0 for k in self.ks):
            raise ValueError(f"k values must be positive, got {list(self.ks)}")
        if isinstance(self.order, str) and self.order not in ORDER_POLICIES:
            raise ValueError(f"unknown order policy {self.order!r}")
        if self.oracle.n != self.ground.n:
            raise ValueError(
                f"objective has {self.oracle.n} elements but the ground set has {self.ground.n}"
            )

    def spec_for(self, k: int) -> FairnessSpec:
        if isinstance(self.bounds, FairnessSpec):
            if self.bounds.k != k:
                return FairnessSpec(self.bounds.lower, self.bounds.upper, k)
            return self.bounds
        return self.bounds(k)

    def stream(self, seed: int) -> list[int]:
        policy = ORDER_POLICIES[self.order] if isinstance(self.order, str) else self.order
        return list(policy(self.ground.n, seed))


@dataclass
class ExperimentResult:
    reports: list[RunReport]
    warnings: list[str] = field(default_factory=list)


def _failed(name, k, seed, message) -> RunReport:
    return RunReport(
        algorithm=name, solution=(), objective=math.nan, err=-1, overflow=0,
        oracle_calls=0, peak_stored_elements=0, inner_size=0, wall_time=0.0,
        k=k, seed=seed, error=message,
    )


def run_cell(oracle: Objective, ground: GroundSet, spec: FairnessSpec, name: str,
             stream: list[int], seed: int) -> RunReport:
    """One run on a private oracle counter; errors are captured in the report."""
    info = get_algorithm(name)
    local = oracle.fork()
    try:
        report = info.run(stream, local, ground, spec, seed)
    except (ValueError, RuntimeError) as exc:
        return _failed(name, spec.k, seed, f"{type(exc).__name__}: {exc}")
    report.algorithm = name
    report.seed = seed
    fresh = oracle.value(report.solution)
    if not (fresh == report.objective or math.isclose(fresh, report.objective, rel_tol=1e-12)):
        raise AssertionError(f"{name}: reported objective {report.objective} != f(S) = {fresh}")
    return report


def _run_cell_args(args):
    return run_cell(*args)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every (k, algorithm, seed) cell; the result order is that nesting order."""
    notes: list[str] = []
    cells = []
    failures: dict[int, RunReport] = {}
    for k in config.ks:
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                spec = config.spec_for(k)
            notes.extend(f"k={k}: {w.message}" for w in caught)
        except ValueError as exc:
            for name in config.algorithms:
                for seed in config.seeds:
                    failures[len(cells)] = _failed(name, k, seed, f"{type(exc).__name__}: {exc}")
                    cells.append(None)
            continue
        for name in config.algorithms:
            for seed in config.seeds:
                cells.append((config.oracle, config.ground, spec, name, config.stream(seed), seed))

    todo = [(i, c) for i, c in enumerate(cells) if c is not None]
    if config.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            done = list(pool.map(_run_cell_args, [c for _, c in todo]))
    else:
        done = [run_cell(*c) for _, c in todo]
    reports: list[RunReport] = [None] * len(cells)  # type: ignore[list-item]
    for (i, _), report in zip(todo, done):
        reports[i] = report
    for i, report in failures.items():
        reports[i] = report
    return ExperimentResult(reports, notes)


def summarize(reports: Sequence[RunReport]) -> list[dict]:
    """Mean/min/max of objective, err and oracle calls per (algorithm, k)."""
    groups: dict[tuple[str, int], list[RunReport]] = {}
    for r in reports:
        if r.error is None:
            groups.setdefault((r.algorithm, r.k), []).append(r)
    rows = []
    for (name, k), group in groups.items():
        row = {"algorithm": name, "k": k, "runs": len(group)}
        for metric in ("objective", "err", "oracle_calls"):
            values = [getattr(r, metric) for r in group]
            row[f"{metric}_mean"] = statistics.fmean(values)
            row[f"{metric}_min"] = min(values)
            row[f"{metric}_max"] = max(values)
        rows.append(row)
    return rows
