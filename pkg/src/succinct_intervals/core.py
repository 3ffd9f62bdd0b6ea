"""Interval representations, sampling, conversion and brute-force oracles.

A universal representation of an n-vertex interval graph gives vertex
``i`` the interval ``[i, e_i]`` with ``i <= e_i <= n``; the left endpoints
are exactly ``1..n``.  All public vertex indices are 1-based.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InconsistentDegrees, InvalidRepresentation


@dataclass(frozen=True)
class Violation:
    index: int  # 1-based; 0 when the problem is the length
    reason: str

    def __str__(self):
        return f"index {self.index}: {self.reason}" if self.index else self.reason


def validate_universal(e: Sequence[int], n: int | None = None) -> Violation | None:
    """Return ``None`` if ``e`` is a valid universal representation,
    otherwise the first violation found."""
    if n is None:
        n = len(e)
    if len(e) != n:
        return Violation(0, f"wrong length: expected {n} endpoints, got {len(e)}")
    for i, ei in enumerate(e, start=1):
        if ei < i:
            return Violation(i, f"e_{i} = {ei} < {i}")
        if ei > n:
            return Violation(i, f"e_{i} = {ei} > n = {n}")
    return None


@dataclass(frozen=True, eq=True)
class UniversalRep:
    """Right endpoints ``e_1..e_n``; vertex ``i`` owns ``[i, e_i]``."""

    e: tuple

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(int(v) for v in self.e))
        if not self.e:
            raise InvalidRepresentation("a representation needs at least one vertex", 0)
        bad = validate_universal(self.e)
        if bad is not None:
            raise InvalidRepresentation(str(bad), bad.index)

    @property
    def n(self) -> int:
        return len(self.e)

    def endpoint(self, i: int) -> int:
        _check_vertex(i, self.n)
        return self.e[i - 1]

    def interval(self, i: int) -> tuple[int, int]:
        return i, self.endpoint(i)


@dataclass(frozen=True)
class ClassicRep:
    """Intervals ``(L_i, R_i)`` with all 2n endpoints distinct in ``[1, 2n]``."""

    intervals: tuple

    def __post_init__(self):
        ivs = tuple((int(a), int(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        n = len(ivs)
        if n == 0:
            raise InvalidRepresentation("empty interval family")
        seen = set()
        for k, (a, b) in enumerate(ivs, start=1):
            if not a < b:
                raise InvalidRepresentation(f"interval {k} has L={a} >= R={b}", k)
            for v in (a, b):
                if not 1 <= v <= 2 * n:
                    raise InvalidRepresentation(f"endpoint {v} of interval {k} outside [1, {2 * n}]", k)
                if v in seen:
                    raise InvalidRepresentation(f"endpoint {v} repeated (interval {k})", k)
                seen.add(v)

    @property
    def n(self) -> int:
        return len(self.intervals)


def _check_vertex(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise IndexError(f"vertex {i} outside [1, {n}]")


# -- sampling -----------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_uniform(n: int, seed=None) -> UniversalRep:
    """Draw a representation uniformly from all ``n!`` of them.

    Each ``e_i`` is independent and uniform on ``[i, n]``.  ``seed`` may be
    an integer or a caller-owned ``numpy.random.Generator``.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = _rng(seed)
    lows = np.arange(1, n + 1, dtype=np.int64)
    e = rng.integers(lows, n + 1, dtype=np.int64)
    return UniversalRep(e.tolist())


def sample_uniform_batch(n: int, count: int, seed=None) -> np.ndarray:
    """``count`` independent samples as a ``(count, n)`` endpoint array."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = _rng(seed)
    lows = np.arange(1, n + 1, dtype=np.int64)
    return rng.integers(lows, n + 1, size=(count, n), dtype=np.int64)


def rep_index(e: Sequence[int]) -> int:
    """Rank of a representation in ``[0, n!)`` (mixed radix over e_i - i)."""
    n = len(e)
    idx = 0
    for i, ei in enumerate(e, start=1):
        idx = idx * (n - i + 1) + (ei - i)
    return idx


# -- conversion ---------------------------------------------------------------


def normalize_to_classic(raw: Iterable[tuple[float, float]]) -> ClassicRep:
    """Map closed intervals with arbitrary endpoints onto distinct integers
    in ``[1, 2n]`` without changing which pairs intersect.

    Equal coordinates are ordered left endpoints first, so touching closed
    intervals stay adjacent.
    """
    raw = list(raw)
    if not raw:
        raise InvalidRepresentation("empty interval family")
    events = []
    for k, (a, b) in enumerate(raw):
        if a > b:
            raise InvalidRepresentation(f"interval {k + 1} has left {a} > right {b}", k + 1)
        events.append((a, 0, k))
        events.append((b, 1, k))
    events.sort()
    out = [[0, 0] for _ in raw]
    for rank, (_, side, k) in enumerate(events, start=1):
        out[k][side] = rank
    return ClassicRep(tuple(map(tuple, out)))


def left_rank_order(c: ClassicRep) -> list[int]:
    """Original (1-based) interval index of each new vertex ``1..n``."""
    return [k + 1 for k in sorted(range(c.n), key=lambda k: c.intervals[k][0])]


def classic_to_universal(c: ClassicRep) -> UniversalRep:
    """Universal form of a classic representation.

    The interval with the k-th smallest left endpoint becomes vertex k, and
    ``e_k`` is the number of left endpoints below its right endpoint.
    """
    order = sorted(c.intervals)
    lefts = [a for a, _ in order]
    return UniversalRep([bisect.bisect_left(lefts, b) for _, b in order])


def intersection_matrix(intervals: Sequence[tuple[float, float]]) -> np.ndarray:
    """Adjacency of closed intervals by direct intersection (diagonal true)."""
    n = len(intervals)
    m = np.zeros((n, n), dtype=bool)
    for u in range(n):
        a1, b1 = intervals[u]
        for v in range(n):
            a2, b2 = intervals[v]
            m[u, v] = max(a1, a2) <= min(b1, b2)
    return m


# -- oracles ------------------------------------------------------------------


def oracle_adj(rep: UniversalRep, i: int, j: int) -> bool:
    _check_vertex(i, rep.n)
    _check_vertex(j, rep.n)
    a, b = (i, j) if i <= j else (j, i)
    return rep.e[a - 1] >= b


def oracle_deg(rep: UniversalRep, i: int) -> int:
    _check_vertex(i, rep.n)
    e = rep.e
    before = sum(1 for j in range(1, i) if e[j - 1] >= i)
    return before + e[i - 1] - i


def oracle_degrees(rep: UniversalRep) -> list[int]:
    """All degrees in O(n): ``e_i - i`` plus intervals still open at ``i``."""
    n = rep.n
    ends = [0] * (n + 2)
    for v in rep.e:
        ends[v] += 1
    out = []
    closed = 0  # intervals with e_j <= i - 1
    for i, ei in enumerate(rep.e, start=1):
        out.append((i - 1 - closed) + ei - i)
        closed += ends[i]
    return out


def adjacency_matrix(rep: UniversalRep) -> np.ndarray:
    e = np.asarray(rep.e)
    idx = np.arange(1, rep.n + 1)
    upper = e[:, None] >= idx[None, :]
    upper &= idx[:, None] <= idx[None, :]
    return upper | upper.T


def endpoint_via_adj(adj_fn: Callable[[int, int], bool], i: int, n: int) -> int:
    """Recover ``e_i`` by binary search over ``adj(i, .)`` on ``[i, n]``."""
    _check_vertex(i, n)
    lo, hi = i, n  # adj(i, lo) holds
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if adj_fn(i, mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def reconstruct_from_degrees(deg_fn: Callable[[int], int], n: int) -> UniversalRep:
    """Decode every interval left to right: ``e_k = k + deg(k) - k'`` with
    ``k'`` the number of earlier intervals reaching ``k``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    ends = [0] * (n + 2)
    closed = 0
    e = []
    for k in range(1, n + 1):
        open_before = k - 1 - closed
        ek = k + deg_fn(k) - open_before
        if not k <= ek <= n:
            raise InconsistentDegrees(f"degree of vertex {k} implies e_{k} = {ek} outside [{k}, {n}]", k)
        e.append(ek)
        ends[ek] += 1
        closed += ends[k]
    return UniversalRep(e)
