"""Set-function oracles with exact evaluation counting.

Every oracle exposes ``evaluate(S)`` (counted) and ``value(S)`` (not
counted, for verification).  ``marginal_gain`` goes through ``evaluate``
so its calls are counted as well.
"""

from __future__ import annotations

import copy
import math
import threading
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from fairstream.core import ContractViolation


class StaleCacheError(RuntimeError):
    """A cached ``f(S)`` handed to ``marginal_gain`` did not match ``f(S)``."""


class Objective:
    """Base class: subclasses implement ``_f(elements)`` on a list of ids."""

    name = "objective"
    #: Re-evaluate cached values in ``marginal_gain`` and raise on mismatch.
    debug = False

    def __init__(self, n: int):
        self.n = int(n)
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def call_count(self) -> int:
        return self._calls

    def __getstate__(self):
        state = self.__dict__.copy()
        state.pop("_lock", None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    def reset_count(self) -> None:
        with self._lock:
            self._calls = 0

    def fork(self) -> Objective:
        """Shallow copy sharing instance data but with its own counter."""
        other = copy.copy(self)
        other._calls = 0
        other._lock = threading.Lock()
        return other

    def _elements(self, S: Iterable[int]) -> list[int]:
        items = list(S)
        for e in items:
            if not 0 <= e < self.n:
                raise ContractViolation(f"element {e} outside ground set of size {self.n}")
        return items

    def _f(self, items: list[int]) -> float:
        raise NotImplementedError

    def value(self, S: Iterable[int]) -> float:
        return self._f(self._elements(S))

    def evaluate(self, S: Iterable[int]) -> float:
        with self._lock:
            self._calls += 1
        return self._f(self._elements(S))

    def marginal_gain(self, e: int, S: Sequence[int], cached_fS: float | None = None) -> float:
        """``f(S + e) - f(S)``; one call with a cached ``f(S)``, two without."""
        if cached_fS is None:
            cached_fS = self.evaluate(S)
        elif self.debug:
            actual = self.value(S)
            if not math.isclose(actual, cached_fS, rel_tol=1e-9, abs_tol=1e-9):
                raise StaleCacheError(f"cached f(S)={cached_fS!r} but f(S)={actual!r}")
        return self.evaluate([*S, e]) - cached_fS

    def describe(self) -> dict:
        return {"family": self.name, "n": self.n}


class SetFunction(Objective):
    """Wrap an arbitrary callable ``fn(frozenset) -> float``."""

    name = "callable"

    def __init__(self, n: int, fn: Callable[[frozenset], float]):
        super().__init__(n)
        self.fn = fn

    def _f(self, items):
        return float(self.fn(frozenset(items)))


class Coverage(Objective):
    """``f(S) = |union of N(v) for v in S|``.

    Neighbourhoods are stored as integer bitmasks over the universe.
    """

    name = "coverage"

    def __init__(self, neighborhoods: Sequence[Iterable[int]]):
        super().__init__(len(neighborhoods))
        self.neighborhoods = [frozenset(int(u) for u in nb) for nb in neighborhoods]
        self._masks = []
        for nb in self.neighborhoods:
            mask = 0
            for u in nb:
                if u < 0:
                    raise ContractViolation(f"universe item {u} is negative")
                mask |= 1 << u
            self._masks.append(mask)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], directed: bool = True) -> Coverage:
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for v, u in edges:
            nbrs[v].add(u)
            if not directed:
                nbrs[u].add(v)
        return cls(nbrs)

    def _f(self, items):
        mask = 0
        masks = self._masks
        for e in items:
            mask |= masks[e]
        return float(mask.bit_count())

    def describe(self):
        return {"family": self.name, "n": self.n,
                "universe": len(set().union(*self.neighborhoods)) if self.n else 0}


class FacilityLocation(Objective):
    """Exemplar clustering: ``f(S) = C - sum_r min_{e in S} ||r - x_e||^2``, ``f({}) = 0``."""

    name = "facility_location"

    def __init__(self, candidates, records=None, shift: float | None = None):
        candidates = np.asarray(candidates, dtype=float)
        if candidates.ndim != 2:
            raise ContractViolation("candidates must be a 2-d array of feature rows")
        records = candidates if records is None else np.asarray(records, dtype=float)
        super().__init__(candidates.shape[0])
        self.candidates = candidates
        self.records = records
        sq_r = (records**2).sum(axis=1)[:, None]
        sq_c = (candidates**2).sum(axis=1)[None, :]
        dist = np.maximum(sq_r + sq_c - 2.0 * records @ candidates.T, 0.0)
        # columns per candidate so min over S is a contiguous reduction
        self._dist_t = np.ascontiguousarray(dist.T)
        max_d = float(dist.max()) if dist.size else 0.0
        self.shift = records.shape[0] * max_d if shift is None else float(shift)
        worst_cost = float(dist.max(axis=1).sum()) if dist.size else 0.0
        if self.shift < worst_cost - 1e-9:
            raise ContractViolation("shift too small to keep the objective non-negative")

    def _f(self, items):
        if not items:
            return 0.0
        closest = self._dist_t[items].min(axis=0)
        return self.shift - float(closest.sum())

    def describe(self):
        return {"family": self.name, "n": self.n, "records": int(self.records.shape[0]),
                "shift": self.shift}


class LogDet(Objective):
    """``f(S) = logdet((L + eps I)_S) + |S| * gamma`` with ``f({}) = 0``.

    ``gamma = max(0, -log lambda_min(L + eps I))`` makes every non-empty
    value non-negative by eigenvalue interlacing.  The same interlacing
    bound keeps every marginal non-negative too, so with this default shift
    the function is monotone.  Pass ``gamma`` explicitly (e.g. the smallest
    shift found by :func:`minimal_logdet_shift`) to keep non-monotonicity.
    """

    name = "log_det"

    def __init__(self, kernel, epsilon: float = 0.1, gamma: float | None = None):
        L = np.asarray(kernel, dtype=float)
        if L.ndim != 2 or L.shape[0] != L.shape[1]:
            raise ContractViolation(f"kernel must be square, got shape {L.shape}")
        super().__init__(L.shape[0])
        self.epsilon = float(epsilon)
        self.M = L + self.epsilon * np.eye(L.shape[0])
        lam_min = float(np.linalg.eigvalsh(self.M)[0]) if self.n else 1.0
        if lam_min <= 0:
            raise ContractViolation(
                f"L + eps*I is not positive definite (smallest eigenvalue {lam_min:.3g})"
            )
        self.lambda_min = lam_min
        self.gamma = max(0.0, -math.log(lam_min)) if gamma is None else float(gamma)

    def _f(self, items):
        if not items:
            return 0.0
        sub = self.M[np.ix_(items, items)]
        chol = np.linalg.cholesky(sub)
        return 2.0 * float(np.log(np.diag(chol)).sum()) + len(items) * self.gamma

    def describe(self):
        return {"family": self.name, "n": self.n, "epsilon": self.epsilon, "gamma": self.gamma}


def minimal_logdet_shift(kernel, epsilon: float = 0.1) -> float:
    """Smallest ``gamma >= 0`` with ``logdet(M_S) + |S| gamma >= 0`` for all non-empty ``S``.

    Enumerates all subsets, so only for small kernels.
    """
    M = np.asarray(kernel, dtype=float) + epsilon * np.eye(len(kernel))
    n = M.shape[0]
    if n > 16:
        raise ContractViolation(f"exhaustive shift search needs n <= 16, got {n}")
    gamma = 0.0
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        _, logdet = np.linalg.slogdet(M[np.ix_(idx, idx)])
        gamma = max(gamma, -logdet / len(idx))
    return gamma


class MovieUtility(Objective):
    """Diversity-plus-relevance utility for one user.

    ``alpha * sum_{m'} max(max_{m in S} <v_m, v_m'>, 0) + (1 - alpha) * sum_{m in S} <w, v_m>``
    """

    name = "movie_utility"

    def __init__(self, user_vector, movie_vectors, alpha: float = 0.85):
        V = np.asarray(movie_vectors, dtype=float)
        w = np.asarray(user_vector, dtype=float)
        if V.ndim != 2 or w.shape != (V.shape[1],):
            raise ContractViolation(
                f"user vector of shape {w.shape} incompatible with movies of shape {V.shape}"
            )
        if not 0.0 <= alpha <= 1.0:
            raise ContractViolation(f"alpha must lie in [0, 1], got {alpha}")
        super().__init__(V.shape[0])
        self.alpha = float(alpha)
        self.user_vector = w
        self.movie_vectors = V
        self._gram = np.ascontiguousarray(V @ V.T)
        self._scores = V @ w

    def _f(self, items):
        if not items:
            return 0.0
        best = np.maximum(self._gram[items].max(axis=0), 0.0)
        return self.alpha * float(best.sum()) + (1.0 - self.alpha) * float(
            self._scores[items].sum()
        )

    def describe(self):
        return {"family": self.name, "n": self.n, "alpha": self.alpha,
                "dim": int(self.movie_vectors.shape[1])}


class Nullifier(Objective):
    """``f(S) = |S|`` unless the nullifier ``x`` is in ``S``, then ``|S & A|``."""

    name = "nullifier"

    def __init__(self, n: int, A: Iterable[int], x: int):
        super().__init__(n)
        self.A = frozenset(A)
        self.x = int(x)
        if self.x in self.A:
            raise ContractViolation("the nullifier cannot belong to A")

    def _f(self, items):
        S = set(items)
        if self.x in S:
            return float(len(S & self.A))
        return float(len(S))


class DirectedCut(Objective):
    """``f(S)`` = number of arcs leaving ``S``."""

    name = "cut"

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]]):
        super().__init__(n)
        out: list[list[int]] = [[] for _ in range(n)]
        self.arcs = []
        for v, w in arcs:
            if not (0 <= v < n and 0 <= w < n):
                raise ContractViolation(f"arc ({v}, {w}) outside ground set of size {n}")
            out[v].append(w)
            self.arcs.append((v, w))
        self._out = out

    def _f(self, items):
        S = set(items)
        out = self._out
        return float(sum(1 for v in S for w in out[v] if w not in S))

    def describe(self):
        return {"family": self.name, "n": self.n, "arcs": len(self.arcs)}


@dataclass
class SubmodularityReport:
    checks: int = 0
    violations: int = 0
    worst_violation: float = 0.0
    min_marginal: float = math.inf
    examples: list = field(default_factory=list)

    @property
    def submodular(self) -> bool:
        return self.violations == 0

    @property
    def monotone(self) -> bool:
        return self.min_marginal >= -1e-9


def _record(report, f, X, Y, e, tol):
    gain_x = f(X | {e}) - f(X)
    gain_y = f(Y | {e}) - f(Y)
    report.checks += 1
    report.min_marginal = min(report.min_marginal, gain_x, gain_y)
    gap = gain_y - gain_x
    if gap > tol:
        report.violations += 1
        report.worst_violation = max(report.worst_violation, gap)
        if len(report.examples) < 5:
            report.examples.append((sorted(X), sorted(Y), e, gap))


def verify_submodularity(
    oracle: Objective,
    trials: int = 1000,
    seed: int | None = 0,
    tolerance: float = 1e-9,
    exhaustive: bool = False,
) -> SubmodularityReport:
    """Check diminishing returns ``f(e|X) >= f(e|Y)`` on chains ``X <= Y``, ``e`` not in ``Y``.

    With ``exhaustive=True`` every chain is visited (only sensible for
    ``n <= 8``); otherwise ``trials`` chains are drawn at random.  Uses the
    uncounted ``value`` path.
    """
    n = oracle.n
    report = SubmodularityReport()
    cache: dict[frozenset, float] = {}

    def f(S):
        key = frozenset(S)
        if key not in cache:
            cache[key] = oracle.value(sorted(key))
        return cache[key]

    if exhaustive:
        for ymask in range(1 << n):
            Y = frozenset(i for i in range(n) if ymask >> i & 1)
            outside = [e for e in range(n) if not ymask >> e & 1]
            sub = ymask
            while True:
                X = frozenset(i for i in range(n) if sub >> i & 1)
                for e in outside:
                    _record(report, f, X, Y, e, tolerance)
                if sub == 0:
                    break
                sub = (sub - 1) & ymask
        return report

    rng = np.random.default_rng(seed)
    if n < 1:
        return report
    for _ in range(trials):
        e = int(rng.integers(n))
        rest = np.array([v for v in range(n) if v != e], dtype=int)
        y_mask = rng.random(rest.size) < rng.random()
        Y = rest[y_mask]
        X = Y[rng.random(Y.size) < rng.random()]
        _record(report, f, frozenset(X.tolist()), frozenset(Y.tolist()), e, tolerance)
        if len(cache) > 50_000:
            cache.clear()
    return report
