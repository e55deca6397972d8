"""Small random instances for tests, benchmarks and the bundled configs."""

from __future__ import annotations

import numpy as np

from fairstream.core import FairnessSpec, GroundSet
from fairstream.objectives import (
    Coverage,
    DirectedCut,
    FacilityLocation,
    LogDet,
    minimal_logdet_shift,
)


def random_coloring(n: int, num_colors: int, rng, weights=None) -> GroundSet:
    """Random coloring in which every color owns at least one element (needs ``n >= C``)."""
    rng = np.random.default_rng(rng)
    if n < num_colors:
        raise ValueError(f"cannot give {num_colors} colors one element each with n={n}")
    p = None if weights is None else np.asarray(weights, float) / np.sum(weights)
    colors = list(range(num_colors)) + rng.choice(num_colors, size=n - num_colors, p=p).tolist()
    rng.shuffle(colors)
    return GroundSet(tuple(colors), num_colors)


def random_coverage(n: int, universe: int, density: float, rng) -> Coverage:
    rng = np.random.default_rng(rng)
    hits = rng.random((n, universe)) < density
    return Coverage([np.flatnonzero(row).tolist() for row in hits])


def random_facility(n: int, dim: int, rng) -> FacilityLocation:
    rng = np.random.default_rng(rng)
    return FacilityLocation(rng.normal(size=(n, dim)))


def random_kernel(
    n: int, dim: int, rng, epsilon: float = 0.1, scale: float = 1.0, minimal_shift: bool = False
) -> LogDet:
    """Log-det objective on a linear kernel ``scale * X X^T`` of random features.

    ``minimal_shift`` replaces the eigenvalue shift by the exact smallest one
    (exhaustive, small ``n`` only), which keeps the function non-monotone.
    """
    rng = np.random.default_rng(rng)
    X = rng.normal(size=(n, dim)) / np.sqrt(dim)
    L = scale * (X @ X.T)
    gamma = minimal_logdet_shift(L, epsilon) if minimal_shift else None
    return LogDet(L, epsilon=epsilon, gamma=gamma)


def random_cut(n: int, density: float, rng) -> DirectedCut:
    rng = np.random.default_rng(rng)
    arcs = [(v, w) for v in range(n) for w in range(n) if v != w and rng.random() < density]
    return DirectedCut(n, arcs)


def random_feasible_spec(ground: GroundSet, rng, k: int | None = None) -> FairnessSpec:
    """Random bounds for which a feasible set exists on ``ground``."""
    rng = np.random.default_rng(rng)
    sizes = ground.color_sizes
    if k is None:
        k = int(rng.integers(1, max(2, ground.n // 2) + 1))
    upper = [int(rng.integers(0, s + 1)) if rng.random() < 0.8 else int(rng.integers(0, k + 1))
             for s in sizes]
    lower = [int(rng.integers(0, min(u, s) + 1)) for u, s in zip(upper, sizes)]
    while sum(lower) > k:
        c = int(np.argmax(lower))
        lower[c] -= 1
    return FairnessSpec(tuple(lower), tuple(upper), k)


def skewed_coverage(
    n: int = 2000,
    num_colors: int = 7,
    universe: int | None = None,
    seed: int = 0,
    decay: float = 0.85,
    base_degree: float = 40.0,
) -> tuple[Coverage, GroundSet]:
    """Coverage graph whose high-coverage nodes concentrate in a few colors.

    Color ``c`` gets share proportional to ``c + 1`` of the nodes and an
    average neighbourhood size ``base_degree * decay**c + 2``, so an
    unconstrained maximizer over-represents the low-numbered colors.
    Smaller ``decay`` widens the gap between fair and unfair optima.
    """
    rng = np.random.default_rng(seed)
    universe = universe or n
    ground = random_coloring(n, num_colors, rng, weights=np.arange(1, num_colors + 1))
    neighborhoods = []
    for e in range(n):
        c = ground.colors[e]
        mean_degree = base_degree * decay**c + 2
        degree = min(universe, 1 + rng.poisson(mean_degree))
        neighborhoods.append(rng.choice(universe, size=degree, replace=False).tolist())
    return Coverage(neighborhoods), ground
