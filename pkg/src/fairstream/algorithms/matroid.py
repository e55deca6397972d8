"""Single-pass swap algorithms for a matroid given by an ``ExtendabilityTracker``.

``ChakrabartiKale`` is the monotone 1/4-approximation; ``FeldmanKarbasiKazemi``
subsamples arrivals and is the non-monotone one.  Both come in a
``"theory"`` variant (the exchange rule with the factor 2) and a
``"practical"`` variant that swaps iff ``f(S + e - e') >= f(S)``.

Ties between candidate elements are broken by the smallest element id.
"""

from __future__ import annotations

import copy
import heapq

from fairstream.core import ExtendabilityTracker, GroundSet
from fairstream.objectives import Objective

VARIANTS = ("theory", "practical")


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


class ChakrabartiKale:
    """Streaming state of the Chakrabarti-Kale exchange algorithm.

    Members keep the weight ``w(e) = f(e | S)`` computed when they arrived.
    The lightest displaceable member is found through three heaps: all
    members, members per color, and colors above their lower bound keyed by
    their lightest member, so each arrival costs ``O(log k)``.

    The theory variant evaluates ``f(S)`` and ``f(S + e)`` afresh for every
    arrival (exactly two oracle calls).  The practical variant caches
    ``f(S)``, so it spends one call on ``f(S + e)`` and a second one on
    ``f(S + e - e')`` only when an exchange is considered.
    """

    def __init__(
        self,
        oracle: Objective,
        ground: GroundSet,
        tracker: ExtendabilityTracker,
        variant: str = "practical",
        use_queues: bool = True,
    ):
        _check_variant(variant)
        self.oracle = oracle
        self.colors = ground.colors
        self.tracker = tracker
        self.variant = variant
        self.use_queues = use_queues
        self.weights: dict[int, float] = {}
        self.cached_fS = 0.0
        self._heap: list[tuple[float, int]] = []
        self._color_heaps: list[list[tuple[float, int]]] = [[] for _ in range(ground.num_colors)]
        self._surplus: list[tuple[float, int, int]] = []

    @property
    def solution(self) -> list[int]:
        return list(self.weights)

    def __len__(self):
        return len(self.weights)

    def clone(self) -> ChakrabartiKale:
        """Independent copy of the streaming state (the oracle is shared)."""
        other = copy.copy(self)
        other.tracker = self.tracker.copy()
        other.weights = dict(self.weights)
        other._heap = list(self._heap)
        other._color_heaps = [list(h) for h in self._color_heaps]
        other._surplus = list(self._surplus)
        return other

    def _top(self, heap):
        while heap and heap[0][1] not in self.weights:
            heapq.heappop(heap)
        return heap[0] if heap else None

    def _refresh_surplus(self, col):
        if self.tracker.t[col] > self.tracker.spec.lower[col]:
            top = self._top(self._color_heaps[col])
            if top is not None:
                heapq.heappush(self._surplus, (top[0], top[1], col))

    def _insert(self, e, w):
        col = self.colors[e]
        self.tracker.update(col)
        self.weights[e] = w
        if self.use_queues:
            heapq.heappush(self._heap, (w, e))
            heapq.heappush(self._color_heaps[col], (w, e))
            self._refresh_surplus(col)

    def _remove(self, e):
        col = self.colors[e]
        self.tracker.remove(col)
        del self.weights[e]
        if self.use_queues:
            self._refresh_surplus(col)

    def _surplus_top(self):
        lower = self.tracker.spec.lower
        t = self.tracker.t
        heap = self._surplus
        while heap:
            w, e, col = heap[0]
            if t[col] > lower[col] and e in self.weights:
                top = self._top(self._color_heaps[col])
                if top is not None and top[1] == e:
                    return (w, e)
            heapq.heappop(heap)
        return None

    def lightest_swappable(self, c: int) -> int | None:
        """Lightest member ``e'`` with ``S + e - e'`` independent, for an arrival of color ``c``."""
        if not self.use_queues:
            return self._lightest_swappable_scan(c)
        kind, _ = self.tracker.good_colors(c)
        if kind == "only":
            best = self._top(self._color_heaps[c])
        elif kind == "all":
            best = self._top(self._heap)
        else:
            options = [x for x in (self._top(self._color_heaps[c]), self._surplus_top()) if x]
            best = min(options) if options else None
        return None if best is None else best[1]

    def _lightest_swappable_scan(self, c):
        can_swap = self.tracker.can_swap
        colors = self.colors
        best = None
        for e, w in self.weights.items():
            if can_swap(c, colors[e]) and (best is None or (w, e) < best):
                best = (w, e)
        return None if best is None else best[1]

    def process(self, e: int) -> None:
        S = list(self.weights)
        if self.variant == "theory":
            f_S = self.oracle.evaluate(S)
            f_Se = self.oracle.evaluate(S + [e])
        else:
            f_S = self.cached_fS
            f_Se = self.oracle.evaluate(S + [e])
        w = f_Se - f_S
        c = self.colors[e]
        if self.tracker.candidate(c):
            self._insert(e, w)
            self.cached_fS = f_Se
            return
        out = self.lightest_swappable(c)
        if out is None:
            return
        if self.variant == "theory":
            if w >= 2 * self.weights[out]:
                self._remove(out)
                self._insert(e, w)
        else:
            f_swapped = self.oracle.evaluate([x for x in S if x != out] + [e])
            if f_swapped >= self.cached_fS:
                self._remove(out)
                self._insert(e, w)
                self.cached_fS = f_swapped


class FeldmanKarbasiKazemi:
    """Streaming state of the Feldman-Karbasi-Kazemi algorithm.

    Each arrival is kept for processing with probability ``sample_prob``
    (1/3) unless ``subsample`` is off.  In the theory variant a member's
    exchange weight is ``f(e' : S)``, its marginal with respect to the
    members that arrived before it.  These are stored when the member
    enters and stay frozen; ``refresh_arrival=True`` recomputes them for
    the whole solution before each exchange decision instead.  The practical
    variant uses ``f(e' | S - e')`` and swaps iff ``f(S + e - e') >= f(S)``.
    """

    def __init__(
        self,
        oracle: Objective,
        ground: GroundSet,
        tracker: ExtendabilityTracker,
        rng=None,
        variant: str = "practical",
        sample_prob: float = 1 / 3,
        subsample: bool = True,
        refresh_arrival: bool = False,
    ):
        _check_variant(variant)
        if subsample and rng is None:
            raise ValueError("subsampling needs a random generator")
        self.oracle = oracle
        self.colors = ground.colors
        self.tracker = tracker
        self.rng = rng
        self.variant = variant
        self.sample_prob = sample_prob
        self.subsample = subsample
        self.refresh_arrival = refresh_arrival
        # insertion order equals arrival order: a newcomer always arrived last
        self.arrival: dict[int, float] = {}
        self.cached_fS = 0.0
        self.processed = 0

    @property
    def solution(self) -> list[int]:
        return list(self.arrival)

    def __len__(self):
        return len(self.arrival)

    def _swappable(self, c):
        can_swap = self.tracker.can_swap
        colors = self.colors
        return [x for x in self.arrival if can_swap(c, colors[x])]

    def _refresh(self):
        prefix = []
        prev = 0.0
        members = list(self.arrival)
        for i, x in enumerate(members):
            prefix.append(x)
            cur = self.cached_fS if i == len(members) - 1 else self.oracle.evaluate(prefix)
            self.arrival[x] = cur - prev
            prev = cur

    def _swap(self, out, e, value):
        c_in, c_out = self.colors[e], self.colors[out]
        self.tracker.exchange(c_in, c_out)
        del self.arrival[out]
        self.arrival[e] = value

    def process(self, e: int) -> None:
        if self.subsample and self.rng.random() >= self.sample_prob:
            return
        self.processed += 1
        c = self.colors[e]
        S = list(self.arrival)
        if self.tracker.candidate(c):
            f_Se = self.oracle.evaluate(S + [e])
            self.tracker.update(c)
            self.arrival[e] = f_Se - self.cached_fS
            self.cached_fS = f_Se
            return
        U = self._swappable(c)
        if not U:
            return
        if self.variant == "theory":
            gain = self.oracle.evaluate(S + [e]) - self.cached_fS
            if self.refresh_arrival:
                self._refresh()
            out = min(U, key=lambda x: (self.arrival[x], x))
            if gain >= 2 * self.arrival[out]:
                rest = [x for x in S if x != out]
                f_new = self.oracle.evaluate(rest + [e])
                f_rest = self.oracle.evaluate(rest)
                self._swap(out, e, f_new - f_rest)
                self.cached_fS = f_new
        else:
            f_S = self.cached_fS
            removal = {x: f_S - self.oracle.evaluate([y for y in S if y != x]) for x in U}
            out = min(U, key=lambda x: (removal[x], x))
            f_new = self.oracle.evaluate([x for x in S if x != out] + [e])
            if f_new >= f_S:
                self._swap(out, e, f_new - (f_S - removal[out]))
                self.cached_fS = f_new
