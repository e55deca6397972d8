"""Fair streaming: run a matroid algorithm on the extendable sets, then augment."""

from __future__ import annotations

from collections.abc import Iterable

from fairstream.algorithms.backup import BackupSets, augment
from fairstream.algorithms.matroid import ChakrabartiKale, FeldmanKarbasiKazemi
from fairstream.algorithms.report import RunClock, RunReport, split_rng
from fairstream.core import ExtendabilityTracker, FairnessSpec, GroundSet, check_instance
from fairstream.objectives import Objective


def _stream_through(inner, backups, stream, colors):
    peak = 0
    for e in stream:
        inner.process(e)
        backups.offer(colors[e], e)
        stored = len(inner) + len(backups)
        if stored > peak:
            peak = stored
    return peak


def fair_streaming_monotone(
    stream: Iterable[int],
    oracle: Objective,
    ground: GroundSet,
    spec: FairnessSpec,
    inner: str = "ck",
    variant: str = "practical",
    seed=None,
) -> RunReport:
    """One pass for monotone ``f``: inner algorithm plus first-arrival backups.

    ``inner="ck"`` uses Chakrabarti-Kale; ``inner="fkk"`` uses
    Feldman-Karbasi-Kazemi with subsampling switched off.
    """
    check_instance(spec, ground)
    clock = RunClock(oracle)
    tracker = ExtendabilityTracker(spec)
    if inner == "ck":
        algo = ChakrabartiKale(oracle, ground, tracker, variant=variant)
    elif inner == "fkk":
        algo = FeldmanKarbasiKazemi(oracle, ground, tracker, variant=variant, subsample=False)
    else:
        raise ValueError(f"inner must be 'ck' or 'fkk', got {inner!r}")
    backups = BackupSets(spec.lower, mode="first")
    peak = _stream_through(algo, backups, stream, ground.colors)
    inner_solution = algo.solution
    solution = augment(inner_solution, backups, spec, ground)
    return clock.finish(
        f"fair-{inner}" + ("-theory" if variant == "theory" else ""),
        solution, ground, spec, peak, len(inner_solution), seed,
        inner_solution=tuple(sorted(inner_solution)),
    )


def fair_streaming_nonmonotone(
    stream: Iterable[int],
    oracle: Objective,
    ground: GroundSet,
    spec: FairnessSpec,
    seed=None,
    variant: str = "practical",
    sample_prob: float = 1 / 3,
    subsample: bool = True,
    refresh_arrival: bool = False,
) -> RunReport:
    """One pass for possibly non-monotone ``f``: subsampled FKK plus reservoir backups."""
    check_instance(spec, ground)
    clock = RunClock(oracle)
    algo_rng, backup_rng = split_rng(seed, 2)
    tracker = ExtendabilityTracker(spec)
    algo = FeldmanKarbasiKazemi(
        oracle, ground, tracker, rng=algo_rng, variant=variant,
        sample_prob=sample_prob, subsample=subsample, refresh_arrival=refresh_arrival,
    )
    backups = BackupSets(spec.lower, mode="reservoir", rng=backup_rng)
    peak = _stream_through(algo, backups, stream, ground.colors)
    inner_solution = algo.solution
    solution = augment(inner_solution, backups, spec, ground)
    return clock.finish(
        "fair-nonmono-fkk" + ("-theory" if variant == "theory" else ""),
        solution, ground, spec, peak, len(inner_solution), seed,
        inner_solution=tuple(sorted(inner_solution)),
        backups=tuple(tuple(b) for b in backups.buffers),
    )
