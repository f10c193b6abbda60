"""Minimum-weight stabbing of intervals of points on a single line."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

_TIE = 1e-12


@dataclass(frozen=True)
class OneDimInstance:
    """Points in strictly increasing position; intervals as inclusive index ranges."""

    positions: tuple[int, ...]
    weights: tuple[float, ...]
    ids: tuple[int, ...]
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not (len(self.positions) == len(self.weights) == len(self.ids)):
            raise ValueError("positions, weights and ids must have equal length")
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError("positions must be strictly increasing")
        for lo, hi in self.intervals:
            if not (0 <= lo <= hi < len(self.positions)):
                raise ValueError(f"interval ({lo}, {hi}) is empty or out of range")

    @classmethod
    def from_lists(cls, weights: Sequence[float], intervals, positions=None, ids=None) -> "OneDimInstance":
        n = len(weights)
        return cls(
            tuple(range(n)) if positions is None else tuple(positions),
            tuple(float(w) for w in weights),
            tuple(range(n)) if ids is None else tuple(ids),
            tuple((int(a), int(b)) for a, b in intervals),
        )


def _less(a: float, b: float) -> bool:
    if b == math.inf:
        return a < b
    return a < b - _TIE * max(1.0, abs(a), abs(b))


def solve_1d(oi: OneDimInstance) -> tuple[tuple[int, ...], float]:
    """Exact optimum; among optimal sets returns the lexicographically smallest by point order.

    ``best[i]`` is the cheapest way to finish once point ``i`` is selected.  The
    next selection ``j`` after ``i`` is admissible iff no interval lies strictly
    between them, i.e. ``j <= reach[i]`` where ``reach[i]`` is the smallest right
    end among intervals starting after ``i``.
    """
    n = len(oi.positions)
    if not oi.intervals:
        return (), 0.0
    # reach[k]: smallest right end among intervals with lo >= k
    reach = [math.inf] * (n + 1)
    for lo, hi in oi.intervals:
        if hi < reach[lo]:
            reach[lo] = hi
    for i in range(n - 1, -1, -1):
        reach[i] = min(reach[i], reach[i + 1])
    after = reach[1:]  # after[i] = min hi over intervals with lo > i
    first_reach = reach[0]

    best = [0.0] * n
    nxt = [-1] * n
    for i in range(n - 1, -1, -1):
        w = oi.weights[i]
        if after[i] == math.inf:
            best[i], nxt[i] = w, -1
            continue
        limit = after[i]
        cand, choice = math.inf, -1
        for j in range(i + 1, limit + 1):
            if _less(best[j], cand):
                cand, choice = best[j], j
        best[i], nxt[i] = w + cand, choice

    cost, start = math.inf, -1
    for j in range(0, first_reach + 1):
        if _less(best[j], cost):
            cost, start = best[j], j
    chosen = []
    i = start
    while i >= 0:
        chosen.append(i)
        i = nxt[i]
    ids = tuple(oi.ids[i] for i in chosen)
    return ids, float(sum(oi.weights[i] for i in chosen))


BRUTE_MAX = 20


def brute_1d(oi: OneDimInstance) -> float:
    """Exhaustive minimum over all subsets; test oracle."""
    n = len(oi.positions)
    if n > BRUTE_MAX:
        raise ValueError(f"brute_1d supports at most {BRUTE_MAX} points, got {n}")
    masks = [sum(1 << k for k in range(lo, hi + 1)) for lo, hi in oi.intervals]
    best = math.inf
    for sub in range(1 << n):
        if all(sub & m for m in masks):
            cost = sum(oi.weights[k] for k in range(n) if sub >> k & 1)
            best = min(best, cost)
    return best


def brute_1d_sets(oi: OneDimInstance):
    """All optimal subsets (index tuples), for tie-break checks in tests."""
    n = len(oi.positions)
    opt = brute_1d(oi)
    out = []
    for r in range(n + 1):
        for combo in itertools.combinations(range(n), r):
            s = set(combo)
            if all(any(k in s for k in range(lo, hi + 1)) for lo, hi in oi.intervals):
                if abs(sum(oi.weights[k] for k in combo) - opt) <= 1e-9:
                    out.append(combo)
    return out
