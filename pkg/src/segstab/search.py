"""Local search for k-restricted instances, and the exact brute-force oracle."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import Instance, SegmentRecord, cross, incidence, requirements
from .rounding import HittingSet, make_hitting_set

BRUTE_CAP = 16


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _on_box(s: SegmentRecord, x: int, y: int) -> bool:
    (ax, ay), (bx, by) = s.a, s.b
    return min(ax, bx) <= x <= max(ax, bx) and min(ay, by) <= y <= max(ay, by)


def _line_meets(line: SegmentRecord, s: SegmentRecord) -> bool:
    ax, ay = line.a
    bx, by = ax + line.direction.dx, ay + line.direction.dy
    if s.is_line:
        return s.direction != line.direction or cross(ax, ay, bx, by, *s.a) == 0
    c1 = _sign(cross(ax, ay, bx, by, *s.a))
    c2 = _sign(cross(ax, ay, bx, by, *s.b))
    return c1 * c2 <= 0


def segments_intersect(s: SegmentRecord, t: SegmentRecord) -> bool:
    """Exact closed-segment intersection from integer orientation tests; full lines allowed."""
    if s.is_line:
        return _line_meets(s, t)
    if t.is_line:
        return _line_meets(t, s)
    p1, p2, q1, q2 = s.a, s.b, t.a, t.b
    d1 = _sign(cross(*q1, *q2, *p1))
    d2 = _sign(cross(*q1, *q2, *p2))
    d3 = _sign(cross(*p1, *p2, *q1))
    d4 = _sign(cross(*p1, *p2, *q2))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and _on_box(t, *p1))
        or (d2 == 0 and _on_box(t, *p2))
        or (d3 == 0 and _on_box(s, *q1))
        or (d4 == 0 and _on_box(s, *q2))
    )


@dataclass(frozen=True)
class RestrictionProfile:
    counts: tuple[int, ...]  # per segment id

    @property
    def k(self) -> int:
        return max(self.counts, default=0)


def restriction_k(inst: Instance) -> RestrictionProfile:
    """For each segment, how many distinct lines of other orientations carry a segment it meets."""
    segs = inst.segments
    counts = []
    for s in segs:
        lines = {t.line_key() for t in segs if t.direction != s.direction and segments_intersect(s, t)}
        counts.append(len(lines))
    return RestrictionProfile(tuple(counts))


# feasibility masks built straight from the incidence predicate ----------------------


def requirement_masks(inst: Instance) -> list[int]:
    masks = []
    for req in requirements(inst):
        m = 0
        for p in inst.points:
            if any(incidence(p, inst.segments[sid]) for sid in req):
                m |= 1 << p.id
        masks.append(m)
    return masks


def _mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def greedy_cover(inst: Instance) -> HittingSet:
    """Max-coverage greedy: repeatedly take the point hitting most open requirements (lowest id on ties)."""
    masks = requirement_masks(inst)
    if any(m == 0 for m in masks):
        raise ValueError("some requirement contains no point")
    open_reqs = list(masks)
    chosen = []
    while open_reqs:
        best = max(range(inst.n), key=lambda p: (sum(m >> p & 1 for m in open_reqs), -p))
        chosen.append(best)
        open_reqs = [m for m in open_reqs if not m >> best & 1]
    return make_hitting_set(inst, chosen)


def _covers(masks: Sequence[int], sel: int) -> bool:
    return all(m & sel for m in masks)


def find_improving_swap(inst_masks: Sequence[int], current: Sequence[int], t: int):
    """First ``(R, A)`` with ``|R| <= t``, ``|A| < |R|`` and ``S - R + A`` feasible, else None.

    Candidates for ``A`` are the points of requirements left open by removing ``R``.
    """
    cur = sorted(current)
    full = _mask(cur)
    for r in range(1, min(t, len(cur)) + 1):
        for rem in itertools.combinations(cur, r):
            rest = full & ~_mask(rem)
            open_reqs = [m for m in inst_masks if not m & rest]
            if not open_reqs:
                return rem, ()
            if r == 1:
                continue
            cand_mask = 0
            for m in open_reqs:
                cand_mask |= m
            cand = [p for p in _bits(cand_mask) if p not in rem]
            for a in range(1, r):
                for add in itertools.combinations(cand, a):
                    am = _mask(add)
                    if all(m & am for m in open_reqs):
                        return rem, add
    return None


def local_search(
    inst: Instance,
    t: int = 3,
    init: HittingSet | Iterable[int] | None = None,
    history: list | None = None,
) -> HittingSet:
    """Apply improving swaps until none of size at most ``t`` remains.

    ``history`` (if given) receives the solution size after every accepted swap,
    starting with the initial size.
    """
    if t < 1:
        raise ValueError("swap size t must be at least 1")
    if t >= 4:
        warnings.warn(f"local search with t={t} enumerates O(n^{t}) swaps per step", RuntimeWarning, stacklevel=2)
    if not inst.is_unit_weight():
        raise ValueError("local search is defined for unit weights only")
    masks = requirement_masks(inst)
    if init is None:
        cur = set(greedy_cover(inst).selected)
    else:
        cur = set(init.selected if isinstance(init, HittingSet) else init)
    if not _covers(masks, _mask(cur)):
        raise ValueError("initial solution is not feasible")
    if history is not None:
        history.append(len(cur))
    while True:
        swap = find_improving_swap(masks, sorted(cur), t)
        if swap is None:
            break
        rem, add = swap
        cur = (cur - set(rem)) | set(add)
        if history is not None:
            history.append(len(cur))
    return make_hitting_set(inst, cur)


def is_locally_optimal(inst: Instance, selected: Iterable[int], t: int) -> bool:
    """Independent re-check: no ``R`` of size at most ``t`` in S and ``A`` outside ``S - R`` with ``|A| < |R|``."""
    masks = requirement_masks(inst)
    sel = sorted(set(selected))
    full = _mask(sel)
    if not _covers(masks, full):
        return False
    for r in range(1, min(t, len(sel)) + 1):
        for rem in itertools.combinations(sel, r):
            rest = full & ~_mask(rem)
            outside = [p for p in range(inst.n) if not rest >> p & 1]
            for a in range(0, r):
                for add in itertools.combinations(outside, a):
                    if _covers(masks, rest | _mask(add)):
                        return False
    return True


def brute_force_opt(inst: Instance, cap: int = BRUTE_CAP) -> tuple[tuple[int, ...], float]:
    """Exact minimum-weight hitting set by branch and bound on the most constrained open requirement."""
    if inst.n > cap:
        raise ValueError(f"brute_force_opt is capped at {cap} points, instance has {inst.n}")
    masks = requirement_masks(inst)
    if any(m == 0 for m in masks):
        raise ValueError("instance is infeasible: some requirement contains no point")
    w = [p.w for p in inst.points]
    best_cost = math.inf
    best_sel = 0

    def rec(sel: int, banned: int, cost: float) -> None:
        nonlocal best_cost, best_sel
        if cost >= best_cost - 1e-12:
            return
        open_reqs = [m & ~banned for m in masks if not m & sel]
        if not open_reqs:
            best_cost, best_sel = cost, sel
            return
        pick = min(open_reqs, key=lambda m: (bin(m).count("1"), m))
        if pick == 0:
            return
        # branch on each candidate; later branches forbid earlier picks to avoid repeats
        excluded = 0
        for p in _bits(pick):
            rec(sel | 1 << p, banned | excluded, cost + w[p])
            excluded |= 1 << p

    rec(0, 0, 0.0)
    if best_cost == math.inf:
        raise ValueError("instance is infeasible")
    return tuple(_bits(best_sel)), float(best_cost)
