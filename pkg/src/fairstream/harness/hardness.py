"""Cut instances that separate ``x[i*] = 1`` from ``x[i*] = 0`` by an ``a/b`` value gap.

Layout of the ground set (three colors):

* ids ``0..n-1``: one element per bit of ``x`` (``v_i`` when ``x_i = 1``,
  a placeholder ``w_i`` otherwise), exactly one of which must be chosen;
* ids ``n..n+b-1``: ``y^1..y^b``, exactly ``b - a`` of which must be chosen;
* ids ``n+b..n+2b-1``: ``z^1..z^b``, none of which may be chosen.

``v_{i*}`` (if present) has arcs to every ``z``; every other first-color
element has arcs to every ``y``.  The optimum is ``b`` when ``x[i*] = 1``
and ``a`` otherwise.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from fairstream.core import FairnessSpec, GroundSet, excess_ratio
from fairstream.objectives import DirectedCut

COLOR_LABELS = ("V1", "V2", "V3")


def _exact(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(str(x))


def choose_fraction(q, epsilon) -> tuple[int, int]:
    """Smallest ``b`` (and matching ``a``) with ``q <= a/b < q + epsilon``."""
    q, epsilon = _exact(q), _exact(epsilon)
    if not 0 <= q <= 1:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    for b in range(1, math.ceil(1 / epsilon) + 1):
        a = math.ceil(q * b)
        if a <= b and Fraction(a, b) < q + epsilon:
            return a, b
    raise ValueError(f"no fraction a/b in [{q}, {q + epsilon})")


@dataclass(frozen=True)
class HardnessInstance:
    x: tuple[int, ...]
    i_star: int
    a: int
    b: int
    ground: GroundSet
    spec: FairnessSpec
    arcs: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def first(self) -> range:
        return range(0, self.n)

    @property
    def second(self) -> range:
        return range(self.n, self.n + self.b)

    @property
    def third(self) -> range:
        return range(self.n + self.b, self.n + 2 * self.b)

    @property
    def bit(self) -> int:
        return self.x[self.i_star]

    @property
    def expected_opt(self) -> int:
        return self.b if self.bit else self.a

    @property
    def q(self) -> Fraction:
        return excess_ratio(self.spec, self.ground)

    def objective(self) -> DirectedCut:
        return DirectedCut(self.ground.n, self.arcs)


def gen_hardness(
    n: int,
    i_star: int,
    x: Sequence[int],
    q_target=None,
    epsilon=None,
    *,
    a: int | None = None,
    b: int | None = None,
) -> HardnessInstance:
    """Build the instance either from ``(q_target, epsilon)`` or from explicit ``a, b``."""
    x = tuple(int(bit) for bit in x)
    if len(x) != n or any(bit not in (0, 1) for bit in x):
        raise ValueError(f"x must be a bit string of length {n}")
    if not 0 <= i_star < n:
        raise ValueError(f"i_star={i_star} outside [0, {n})")
    if a is None or b is None:
        if q_target is None or epsilon is None:
            raise ValueError("give either q_target and epsilon, or a and b")
        a, b = choose_fraction(q_target, epsilon)
    if not 0 <= a <= b or b < 1:
        raise ValueError(f"need 0 <= a <= b and b >= 1, got a={a}, b={b}")
    if Fraction(1, n) > Fraction(b - a, b):
        raise ValueError(
            f"n={n} too small: the first color's ratio 1/n exceeds (b-a)/b={b - a}/{b}"
        )

    second = range(n, n + b)
    third = range(n + b, n + 2 * b)
    arcs = []
    for i in range(n):
        if i == i_star and x[i]:
            arcs.extend((i, z) for z in third)
        else:
            arcs.extend((i, y) for y in second)
    colors = (0,) * n + (1,) * b + (2,) * b
    ground = GroundSet(colors, 3)
    spec = FairnessSpec((1, b - a, 0), (1, b - a, 0), 1 + b - a)
    return HardnessInstance(x, i_star, a, b, ground, spec, tuple(arcs))
