"""Bound-setting recipes that tie per-color windows to group proportions."""

from __future__ import annotations

import math
import warnings
from collections.abc import Sequence
from fractions import Fraction

from fairstream.core import FairnessSpec, GroundSet


class BoundsRepairWarning(UserWarning):
    """Lower bounds were lowered to bring their sum back to ``k``."""


def _exact(x) -> Fraction:
    # str() first so 0.7 means 7/10 rather than its binary expansion
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(str(x))


def proportional_bounds(
    ground: GroundSet,
    k: int,
    lower_slack: float,
    upper_slack: float,
    mode: str = "additive",
    null_color: int | None = None,
    proportions: Sequence[float] | None = None,
) -> FairnessSpec:
    """Per-color bounds proportional to each color's share ``p_c``.

    additive: ``lower = floor(max(0, p_c - lower_slack) * k)``,
    ``upper = ceil(min(1, p_c + upper_slack) * k)``.

    multiplicative: ``lower = floor(lower_slack * p_c * k)``,
    ``upper = ceil(upper_slack * p_c * k)``.

    ``p_c`` defaults to ``n_c / n``; pass ``proportions`` to override it.
    ``null_color`` gets a zero lower bound.  If the lower bounds sum past
    ``k``, the largest one (smallest color id on ties) is decremented
    until they fit, with a :class:`BoundsRepairWarning`.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    s_lo, s_hi = _exact(lower_slack), _exact(upper_slack)
    if s_lo < 0 or s_hi < 0:
        raise ValueError("slacks must be non-negative")
    if proportions is None:
        if ground.n == 0:
            raise ValueError("empty ground set")
        props = [Fraction(size, ground.n) for size in ground.color_sizes]
    else:
        if len(proportions) != ground.num_colors:
            raise ValueError(
                f"{len(proportions)} proportions for {ground.num_colors} colors"
            )
        props = [_exact(p) for p in proportions]

    lower, upper = [], []
    for p in props:
        if mode == "additive":
            lo = math.floor(max(Fraction(0), p - s_lo) * k)
            hi = math.ceil(min(Fraction(1), p + s_hi) * k)
        elif mode == "multiplicative":
            lo = math.floor(s_lo * p * k)
            hi = math.ceil(s_hi * p * k)
        else:
            raise ValueError(f"mode must be 'additive' or 'multiplicative', got {mode!r}")
        lower.append(lo)
        upper.append(max(hi, lo))
    if null_color is not None:
        lower[null_color] = 0

    excess = sum(lower) - k
    if excess > 0:
        for _ in range(excess):
            c = max(range(len(lower)), key=lambda i: (lower[i], -i))
            lower[c] -= 1
        warnings.warn(
            f"lower bounds summed to {k + excess} > k={k}; reduced to {lower}",
            BoundsRepairWarning,
            stacklevel=2,
        )
    return FairnessSpec(tuple(lower), tuple(upper), k)


def segment_coloring(n_frames: int, segment: int) -> GroundSet:
    """Color frame ``i`` by its segment ``i // segment``."""
    if segment < 1:
        raise ValueError(f"segment length must be at least 1, got {segment}")
    num_colors = -(-n_frames // segment)
    return GroundSet(tuple(i // segment for i in range(n_frames)), num_colors)
