"""Segments in ``d`` orientations: round ``k`` primary orientations, repair the rest.

Also hosts the reduction from objects (unions of at most ``h`` segments) to
plain segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .derand import derandomize_plan
from .lp import LpSolution, solve_instance_lp
from .model import Direction, Instance, SegmentRecord, validate
from .rounding import HittingSet, _xs, draw_shifts, make_hitting_set, run_plan


def choose_k(d: int) -> int:
    """``min(d, ceil(ln d + ln ln d))``, clamped to at least 1."""
    if d < 2:
        raise ValueError("need at least two orientations")
    return max(1, min(d, math.ceil(math.log(d) + math.log(math.log(d)))))


def master_bound(d: int, k: int) -> float:
    """Expected-cost factor ``k + (d - k)(k + 1)e^{-k}`` relative to the LP value."""
    return k + (d - k) * (k + 1) * math.exp(-k)


@dataclass(frozen=True)
class OrientPlan:
    d: int
    k: int
    primary: tuple[Direction, ...]
    repair: tuple[Direction, ...]

    @classmethod
    def for_instance(cls, inst: Instance, k: int | None = None) -> "OrientPlan":
        dirs = tuple(inst.directions)
        d = len(dirs)
        if k is None:
            k = choose_k(d)
        if not 1 <= k <= d:
            raise ValueError(f"k must be in [1, {d}], got {k}")
        return cls(d, k, dirs[:k], dirs[k:])

    @property
    def bound_factor(self) -> float:
        return master_bound(self.d, self.k)


def check_primary_lines_distinct(inst: Instance, plan: OrientPlan) -> bool:
    """Distinct points of a repair line never share a primary line (the independence the analysis uses)."""
    idx = inst.index
    for r in plan.repair:
        idx.ensure(r)
        for pts in idx.lines[r].values():
            for t in plan.primary:
                idx.ensure(t)
                keys = [idx.line_of[t][p] for p in pts]
                if len(set(keys)) != len(keys):
                    return False
    return True


@dataclass
class MultiResult:
    hitting_set: HittingSet
    plan: OrientPlan
    lp_value: float
    outcome: object = field(repr=False)
    h: int = 1
    derandomized: bool = False

    @property
    def bound(self) -> float:
        return self.plan.bound_factor * self.lp_value

    @property
    def bound_satisfied(self) -> bool:
        # the estimator covers the union, so this is the deterministic statement
        return self.outcome.estimator <= self.bound + 1e-6


def draw_plan_shifts(inst: Instance, plan: OrientPlan, seed) -> dict:
    shifts = {}
    for d in plan.primary:
        shifts.update(draw_shifts(inst, seed, d))
    return shifts


def solve_multi(
    inst: Instance,
    k: int | None = None,
    seed=0,
    x: LpSolution | Sequence[float] | None = None,
    derandomize: bool = False,
    check: bool = True,
) -> MultiResult:
    """Randomized (or derandomized) ``d``-orientation rounding.

    Instances carrying objects are first reduced to one chosen segment per
    object; the reported ``lp_value`` is then the value of the scaled solution
    ``y`` the rounding actually runs on.
    """
    if check:
        problems = validate(inst)
        if problems:
            raise ValueError("invalid instance: " + "; ".join(problems))
        if len(inst.directions) < 2:
            raise ValueError("multi-orientation solver needs at least two directions")
    h = 1
    work = inst
    if x is None:
        x = solve_instance_lp(inst)
    xs = _xs(x)
    if inst.objects:
        work, xs, h = reduce_union_objects(inst, xs)
    plan = OrientPlan.for_instance(work, k)
    if derandomize:
        res = derandomize_plan(work, xs, plan.primary, plan.repair, plan.bound_factor)
        hs, outcome, lp_value = res.hitting_set, res.outcome, res.lp_value
    else:
        hs, outcome = run_plan(work, xs, draw_plan_shifts(work, plan, seed), plan.primary, plan.repair)
        lp_value = float(np.dot(work.weights, xs))
    if work is not inst:
        hs = make_hitting_set(inst, hs.selected)
    return MultiResult(hs, plan, lp_value, outcome, h, derandomize)


def choose_object_segments(inst: Instance, x: Sequence[float], h: int) -> list[int]:
    """For each object, the lowest-id member segment carrying LP mass at least ``1/h``."""
    seg_points = inst.index.seg_points
    chosen = []
    for j, obj in enumerate(inst.objects or ()):
        pick = None
        for sid in sorted(obj):
            if sum(x[p] for p in seg_points[sid]) >= 1.0 / h - 1e-12:
                pick = sid
                break
        if pick is None:
            raise ValueError(f"object {j}: no member segment has mass >= 1/{h}; x is not object-feasible")
        chosen.append(pick)
    return chosen


def reduce_union_objects(inst: Instance, x, h: int | None = None):
    """Replace each object by one heavy member segment and scale ``y = min(1, h x)``.

    Returns ``(derived instance, y, h)``.  The derived instance keeps every
    point and the standalone segments, renumbering segments densely.
    """
    xs = list(_xs(x))
    objects = inst.objects or ()
    if h is None:
        h = max((len(o) for o in objects), default=1)
    if any(len(o) > h for o in objects):
        raise ValueError(f"an object has more than h={h} segments")
    chosen = choose_object_segments(inst, xs, h)
    grouped = {sid for o in objects for sid in o}
    keep = sorted(set(chosen) | {s.id for s in inst.segments if s.id not in grouped})
    segs = [SegmentRecord(i, s.kind, s.direction, s.a, s.b) for i, s in enumerate(inst.segments[j] for j in keep)]
    derived = Instance.build(inst.points, segs, inst.directions)
    y = [min(1.0, h * v) for v in xs]
    return derived, y, h
