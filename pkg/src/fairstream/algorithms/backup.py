"""Per-color backup buffers and the end-of-stream augmentation step."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from fairstream.core import FairnessSpec, GroundSet, InfeasibleInstanceError


class BackupSets:
    """One buffer per color holding at most ``lower[c]`` elements.

    ``mode="first"`` keeps the first ``lower[c]`` arrivals of each color;
    ``mode="reservoir"`` keeps a uniform sample without replacement.
    """

    def __init__(self, capacities: Iterable[int], mode: str = "first", rng=None):
        if mode not in ("first", "reservoir"):
            raise ValueError(f"unknown backup mode {mode!r}")
        self.capacity = [int(c) for c in capacities]
        self.mode = mode
        self.rng = rng
        self.buffers: list[list[int]] = [[] for _ in self.capacity]
        self.seen = [0] * len(self.capacity)
        if mode == "reservoir" and rng is None:
            raise ValueError("reservoir mode needs a random generator")

    def __len__(self) -> int:
        return sum(len(b) for b in self.buffers)

    def offer(self, c: int, e: int) -> None:
        if self.mode == "first":
            self.seen[c] += 1
            if len(self.buffers[c]) < self.capacity[c]:
                self.buffers[c].append(e)
        else:
            reservoir_insert(self, c, e, self.rng)


def reservoir_insert(buffer: BackupSets, c: int, e: int, rng: np.random.Generator) -> None:
    """Classic reservoir step for color ``c``; draws nothing when the capacity is 0."""
    cap = buffer.capacity[c]
    buffer.seen[c] += 1
    if cap == 0:
        return
    slots = buffer.buffers[c]
    if len(slots) < cap:
        slots.append(e)
        return
    j = int(rng.integers(buffer.seen[c]))
    if j < cap:
        slots[j] = e


def augment(
    solution: Iterable[int], backups: BackupSets, spec: FairnessSpec, ground: GroundSet
) -> list[int]:
    """Top up every color below its lower bound from its backup buffer, in buffer order."""
    result = list(solution)
    members = set(result)
    counts = ground.counts(result)
    for c, lo in enumerate(spec.lower):
        deficit = lo - counts[c]
        if deficit <= 0:
            continue
        for e in backups.buffers[c]:
            if deficit == 0:
                break
            if e in members:
                continue
            result.append(e)
            members.add(e)
            deficit -= 1
        if deficit > 0:
            raise InfeasibleInstanceError(
                f"color {c}: backups could not cover a deficit of {deficit} "
                f"(lower={lo}, only {backups.seen[c]} elements streamed)"
            )
    return result
