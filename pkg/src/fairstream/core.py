"""Ground sets, fairness constraints and the extendability predicates.

Colors are dense integers ``0..C-1`` and elements are dense integers
``0..n-1``.  A set is *feasible* when it respects the global cardinality
``k`` and every per-color window ``[lower[c], upper[c]]``; it is
*extendable* when it is contained in some feasible set.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction


class ContractViolation(ValueError):
    """A caller broke an operation's precondition."""


class InfeasibleInstanceError(ValueError):
    """The fairness constraints admit no feasible solution."""


@dataclass(frozen=True)
class FairnessSpec:
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(int(x) for x in self.lower))
        object.__setattr__(self, "upper", tuple(int(x) for x in self.upper))
        if len(self.lower) != len(self.upper):
            raise ContractViolation(
                f"lower has {len(self.lower)} colors but upper has {len(self.upper)}"
            )
        if self.k < 0:
            raise InfeasibleInstanceError(f"k must be non-negative, got {self.k}")
        for c, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if not 0 <= lo <= hi:
                raise InfeasibleInstanceError(
                    f"color {c}: need 0 <= lower <= upper, got lower={lo}, upper={hi}"
                )
        if sum(self.lower) > self.k:
            raise InfeasibleInstanceError(
                f"sum of lower bounds {sum(self.lower)} exceeds k={self.k} "
                "(need sum(lower) <= k)"
            )

    @property
    def num_colors(self) -> int:
        return len(self.lower)

    @classmethod
    def cardinality_only(cls, num_colors: int, k: int) -> FairnessSpec:
        """Spec with no per-color restriction beyond ``|S| <= k``."""
        return cls((0,) * num_colors, (k,) * num_colors, k)

    def without_lower_bounds(self) -> FairnessSpec:
        return FairnessSpec((0,) * self.num_colors, self.upper, self.k)


@dataclass(frozen=True)
class GroundSet:
    """Partition of ``range(n)`` into colors."""

    colors: tuple[int, ...]
    num_colors: int = -1
    color_sizes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        num_colors = self.num_colors
        if num_colors < 0:
            num_colors = max(colors) + 1 if colors else 0
        object.__setattr__(self, "num_colors", num_colors)
        sizes = [0] * num_colors
        for e, c in enumerate(colors):
            if not 0 <= c < num_colors:
                raise ContractViolation(f"element {e} has color {c} outside [0, {num_colors})")
            sizes[c] += 1
        object.__setattr__(self, "color_sizes", tuple(sizes))

    @property
    def n(self) -> int:
        return len(self.colors)

    def color_of(self, e: int) -> int:
        return self.colors[e]

    def counts(self, S: Iterable[int]) -> list[int]:
        """Per-color counts ``|S & V_c|``."""
        t = [0] * self.num_colors
        for e in S:
            t[self.colors[e]] += 1
        return t

    def members(self, c: int) -> list[int]:
        return [e for e, col in enumerate(self.colors) if col == c]


def _check_length(counts: Sequence[int], spec: FairnessSpec) -> None:
    if len(counts) != spec.num_colors:
        raise ContractViolation(
            f"counts has length {len(counts)}, spec has {spec.num_colors} colors"
        )


def is_feasible(counts: Sequence[int], spec: FairnessSpec) -> bool:
    _check_length(counts, spec)
    if sum(counts) > spec.k:
        return False
    return all(lo <= t <= hi for t, lo, hi in zip(counts, spec.lower, spec.upper))


def is_extendable(counts: Sequence[int], spec: FairnessSpec) -> bool:
    """Membership in the extendability matroid, from per-color counts alone.

    Assumes every color has at least ``lower[c]`` elements in the ground
    set (see :func:`check_instance`).
    """
    _check_length(counts, spec)
    if any(t > hi for t, hi in zip(counts, spec.upper)):
        return False
    return sum(max(t, lo) for t, lo in zip(counts, spec.lower)) <= spec.k


def fairness_error(counts: Sequence[int], spec: FairnessSpec) -> int:
    """Total number of per-color bound violations; ignores ``k``."""
    _check_length(counts, spec)
    return sum(
        max(t - hi, lo - t, 0) for t, lo, hi in zip(counts, spec.lower, spec.upper)
    )


def cardinality_overflow(counts: Sequence[int], spec: FairnessSpec) -> int:
    return max(sum(counts) - spec.k, 0)


def check_instance(spec: FairnessSpec, ground: GroundSet) -> None:
    """Raise unless some feasible set exists for ``spec`` on ``ground``."""
    if spec.num_colors != ground.num_colors:
        raise ContractViolation(
            f"spec has {spec.num_colors} colors, ground set has {ground.num_colors}"
        )
    for c, (lo, size) in enumerate(zip(spec.lower, ground.color_sizes)):
        if lo > size:
            raise InfeasibleInstanceError(
                f"color {c}: lower bound {lo} exceeds its {size} available elements"
            )


def max_feasible_size(spec: FairnessSpec, ground: GroundSet) -> int:
    """Rank of the extendability matroid."""
    return min(spec.k, sum(min(u, s) for u, s in zip(spec.upper, ground.color_sizes)))


def excess_ratio(spec: FairnessSpec, ground: GroundSet) -> Fraction:
    """``1 - max_c lower[c] / n_c`` as an exact fraction."""
    if spec.num_colors != ground.num_colors:
        raise ContractViolation(
            f"spec has {spec.num_colors} colors, ground set has {ground.num_colors}"
        )
    worst = Fraction(0)
    for c, (lo, size) in enumerate(zip(spec.lower, ground.color_sizes)):
        if lo == 0:
            continue
        if size == 0:
            raise InfeasibleInstanceError(f"color {c} has lower bound {lo} but no elements")
        worst = max(worst, Fraction(lo, size))
    return 1 - worst


class ExtendabilityTracker:
    """Constant-time membership oracle for the extendability matroid.

    Keeps the per-color counts ``t`` of the current set and
    ``Q = sum_c max(t[c], lower[c])``.  The set is extendable iff every
    ``t[c] <= upper[c]`` and ``Q <= k``.
    """

    __slots__ = ("spec", "t", "Q", "size")

    def __init__(self, spec: FairnessSpec):
        self.spec = spec
        self.t = [0] * spec.num_colors
        self.Q = sum(spec.lower)
        self.size = 0

    def copy(self) -> ExtendabilityTracker:
        other = ExtendabilityTracker.__new__(ExtendabilityTracker)
        other.spec = self.spec
        other.t = list(self.t)
        other.Q = self.Q
        other.size = self.size
        return other

    def candidate(self, c: int) -> bool:
        """Would adding one element of color ``c`` keep the set extendable?"""
        t_c = self.t[c]
        if t_c == self.spec.upper[c]:
            return False
        if t_c < self.spec.lower[c]:
            return True
        return self.Q < self.spec.k

    def update(self, c: int) -> None:
        if not self.candidate(c):
            raise ContractViolation(
                f"adding an element of color {c} would break extendability "
                f"(t={self.t}, Q={self.Q}, k={self.spec.k})"
            )
        self.t[c] += 1
        self.size += 1
        if self.t[c] > self.spec.lower[c]:
            self.Q += 1

    def remove(self, c: int) -> None:
        if self.t[c] == 0:
            raise ContractViolation(f"no element of color {c} to remove")
        if self.t[c] > self.spec.lower[c]:
            self.Q -= 1
        self.t[c] -= 1
        self.size -= 1

    def can_swap(self, c_in: int, c_out: int) -> bool:
        """Would exchanging a member of color ``c_out`` for one of ``c_in`` stay extendable?"""
        if c_in == c_out:
            return True
        t = self.t
        if t[c_in] == self.spec.upper[c_in]:
            return False
        return not (
            self.Q == self.spec.k
            and t[c_in] >= self.spec.lower[c_in]
            and t[c_out] <= self.spec.lower[c_out]
        )

    def exchange(self, c_in: int, c_out: int) -> None:
        if not self.can_swap(c_in, c_out):
            raise ContractViolation(
                f"swapping color {c_out} out for {c_in} would break extendability"
            )
        self.remove(c_out)
        self.update(c_in)

    def good_colors(self, c: int) -> tuple[str, int]:
        """Classify which member colors may be displaced by an arrival of color ``c``.

        Returns ``("only", c)``, ``("all", c)`` or ``("surplus", c)``; the
        last means color ``c`` plus every color with ``t > lower``.
        """
        t_c = self.t[c]
        if t_c == self.spec.upper[c]:
            return ("only", c)
        if self.Q < self.spec.k or t_c < self.spec.lower[c]:
            return ("all", c)
        return ("surplus", c)

    def is_consistent(self) -> bool:
        lo = self.spec.lower
        return self.Q == sum(max(t, l) for t, l in zip(self.t, lo)) and all(
            t >= 0 for t in self.t
        )

    def __repr__(self):
        return f"ExtendabilityTracker(t={self.t}, Q={self.Q}, k={self.spec.k})"
