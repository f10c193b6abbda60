"""Method of conditional expectations for the shifted-lattice rounding.

Shifts are fixed one line at a time.  For a candidate shift the expected final
cost, conditioned on all shifts fixed so far, is computed exactly: Phase-I
points contribute their selection probability times weight, and every run of
points on a repair line contributes its exact 1-D repair cost times the
probability that it is a maximal run of survivors.  Within one line the
selection pattern only changes at the fractional parts of the prefix sums, so
one representative per breakpoint interval is enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .lp import LpSolution, solve_instance_lp
from .model import HORIZONTAL, VERTICAL, Direction, Instance, LineKey
from .rounding import (
    BOUNDS,
    Block,
    HittingSet,
    _xs,
    check_variant,
    prefix_sums,
    run_plan,
    run_with_shifts,
    solve_block,
    systematic_select,
)

MERGE_TOL = 1e-9
MONOTONE_TOL = 1e-6
BOUND_SLACK = 1e-6


class BoundViolation(AssertionError):
    """A deterministic guarantee failed; always an implementation bug."""


def candidate_intervals(xs: Sequence[float]) -> list[tuple[float, float]]:
    """Subintervals of ``[0, 1)`` on which the line's selection pattern is constant."""
    cuts = []
    for a in prefix_sums(xs):
        f = a - math.floor(a)
        if f < MERGE_TOL or f > 1 - MERGE_TOL:
            f = 0.0
        cuts.append(f)
    cuts = sorted(set(cuts) | {0.0})
    merged = [cuts[0]]
    for c in cuts[1:]:
        if c - merged[-1] > MERGE_TOL:
            merged.append(c)
    ends = merged[1:] + [1.0]
    return list(zip(merged, ends))


def candidate_shifts(xs: Sequence[float]) -> list[float]:
    """Midpoint of every breakpoint-free subinterval; never a breakpoint itself."""
    return [(lo + hi) / 2 for lo, hi in candidate_intervals(xs)]


@dataclass(frozen=True)
class PartialFix:
    """Shifts ``fixed[i]`` for ``lines[i]``, ``i < len(fixed)``; the rest stay random."""

    lines: tuple[LineKey, ...]
    fixed: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.fixed) > len(self.lines):
            raise ValueError("more fixed shifts than lines")
        if any(not 0.0 <= u < 1.0 for u in self.fixed):
            raise ValueError("fixed shifts must lie in [0, 1)")

    def as_dict(self) -> dict:
        return dict(zip(self.lines, self.fixed))

    def extend(self, u: float) -> "PartialFix":
        return PartialFix(self.lines, self.fixed + (u,))


@dataclass
class _RepairLine:
    members: np.ndarray  # point ids by rank
    starts: np.ndarray
    ends: np.ndarray
    costs: np.ndarray


class ConditionalEstimator:
    """Exact conditional expectation of the rounding cost given fixed shifts.

    ``primary`` orientations are rounded; ``repair`` orientations are fixed up
    with exact 1-D solves.  The estimated quantity is the primary weight plus
    the per-orientation repair costs (for two orientations this is exactly the
    output cost).
    """

    def __init__(
        self,
        inst: Instance,
        x,
        primary: Sequence[Direction],
        repair: Sequence[Direction],
        min_pick_lines: bool = False,
    ):
        self.inst = inst
        self.xs = np.asarray(_xs(x), dtype=float)
        self.w = np.asarray(inst.weights, dtype=float)
        self.primary = tuple(primary)
        self.repair = tuple(repair)
        self.min_pick_lines = min_pick_lines
        idx = inst.index
        for d in self.primary + self.repair:
            idx.ensure(d)
        self.lines: list[LineKey] = [k for d in self.primary for k in idx.lines[d]]
        self.members = {k: np.asarray(idx.lines[k.direction][k], dtype=int) for k in self.lines}
        self._repair_lines = [r for d in self.repair for r in self._runs_for(d)]

    def _runs_for(self, d: Direction) -> list[_RepairLine]:
        """Every run with a positive repair cost, by (start rank, end rank)."""
        idx = self.inst.index
        by_line = idx.segments_by_line(d)
        rank = idx.rank_of[d]
        out = []
        for key, segs in by_line.items():
            pts = idx.lines[d][key]
            ranges = [(rank[idx.seg_points[s][0]], rank[idx.seg_points[s][-1]], s) for s in segs if idx.seg_points[s]]
            starts, ends, costs = [], [], []
            m = len(pts)
            for i in range(m):
                for j in range(i, m):
                    inside = tuple(s for lo, hi, s in ranges if i <= lo and hi <= j)
                    if not inside:
                        continue
                    _, c = solve_block(self.inst, Block(key, tuple(pts[i : j + 1]), inside), self.min_pick_lines)
                    if c > 0:
                        starts.append(i)
                        ends.append(j)
                        costs.append(c)
            if costs:
                out.append(
                    _RepairLine(np.asarray(pts, dtype=int), np.asarray(starts), np.asarray(ends), np.asarray(costs))
                )
        return out

    def pattern(self, key: LineKey, u: float) -> np.ndarray:
        pts = self.members[key]
        return np.asarray(systematic_select(self.xs[pts].tolist(), u), dtype=float)

    def selection_probs(self, fixed: Mapping[LineKey, float]) -> dict[Direction, np.ndarray]:
        probs = {d: self.xs.copy() for d in self.primary}
        for key, u in fixed.items():
            probs[key.direction][self.members[key]] = self.pattern(key, u)
        return probs

    def value(self, fixed: Mapping[LineKey, float]) -> float:
        return self._value(self.selection_probs(fixed))

    def _value(self, probs: dict[Direction, np.ndarray]) -> float:
        surv = np.ones_like(self.xs)
        for p in probs.values():
            surv *= 1.0 - p
        total = float(np.dot(self.w, 1.0 - surv))
        for rl in self._repair_lines:
            total += self._line_repair(rl, surv[rl.members])
        return total

    @staticmethod
    def _line_repair(rl: _RepairLine, s: np.ndarray) -> float:
        # products over runs via log prefix sums, counting exact zeros separately
        zero = s <= 0.0
        logs = np.where(zero, 0.0, np.log(np.where(zero, 1.0, s)))
        cum = np.concatenate([[0.0], np.cumsum(logs)])
        zc = np.concatenate([[0], np.cumsum(zero)])
        i, j = rl.starts, rl.ends
        inner = np.exp(cum[j + 1] - cum[i]) * ((zc[j + 1] - zc[i]) == 0)
        sel = 1.0 - s
        m = len(s)
        left = np.where(i == 0, 1.0, sel[np.maximum(i - 1, 0)])
        right = np.where(j == m - 1, 1.0, sel[np.minimum(j + 1, m - 1)])
        return float(np.dot(rl.costs, inner * left * right))

    def greedy_fix(self, order: Sequence[LineKey] | None = None):
        """Fix lines in ``order``; returns shifts and the trajectory Phi_0..Phi_r."""
        order = list(self.lines if order is None else order)
        probs = {d: self.xs.copy() for d in self.primary}
        phi = [self._value(probs)]
        shifts: dict[LineKey, float] = {}
        for key in order:
            pts = self.members[key]
            best_u, best_v = None, math.inf
            for u in candidate_shifts(self.xs[pts].tolist()):
                probs[key.direction][pts] = self.pattern(key, u)
                v = self._value(probs)
                if v < best_v - 1e-12:
                    best_u, best_v = u, v
            probs[key.direction][pts] = self.pattern(key, best_u)
            if best_v > phi[-1] + MONOTONE_TOL:
                raise BoundViolation(f"conditional cost rose from {phi[-1]} to {best_v} at line {key}")
            shifts[key] = best_u
            phi.append(best_v)
        return shifts, phi


def _primary_repair(variant: str):
    return (HORIZONTAL,), (VERTICAL,), variant == "lines"


def conditional_cost(inst: Instance, x, fix: PartialFix, variant: str = "weighted") -> float:
    """``E[cost | shifts of fix.lines[:k] fixed]`` for the two-orientation algorithm."""
    primary, repair, pick = _primary_repair(variant)
    est = ConditionalEstimator(inst, x, primary, repair, pick)
    return est.value(fix.as_dict())


def horizontal_order(inst: Instance) -> tuple[LineKey, ...]:
    """Horizontal lines by increasing y."""
    inst.index.ensure(HORIZONTAL)
    return tuple(inst.index.lines[HORIZONTAL])


@dataclass
class DerandResult:
    hitting_set: HittingSet
    shifts: dict
    lp_value: float
    bound_factor: float
    phi: list[float] = field(repr=False)
    outcome: object = field(default=None, repr=False)

    @property
    def bound(self) -> float:
        return self.bound_factor * self.lp_value

    @property
    def bound_satisfied(self) -> bool:
        return self.hitting_set.cost <= self.bound + BOUND_SLACK

    @property
    def expected(self) -> float:
        return self.phi[0]


def derandomize(inst: Instance, variant: str = "weighted", x: LpSolution | Sequence[float] | None = None) -> DerandResult:
    """Deterministic two-phase run whose cost is at most the randomized expectation."""
    check_variant(inst, variant)
    if x is None:
        x = solve_instance_lp(inst)
    xs = _xs(x)
    lp_value = float(np.dot(inst.weights, xs))
    primary, repair, pick = _primary_repair(variant)
    est = ConditionalEstimator(inst, xs, primary, repair, pick)
    shifts, phi = est.greedy_fix(horizontal_order(inst))
    hs, outcome = run_with_shifts(inst, xs, shifts, variant)
    result = DerandResult(hs, shifts, lp_value, BOUNDS[variant], phi, outcome)
    _check(result, hs.cost)
    return result


def derandomize_plan(inst: Instance, xs, primary, repair, bound_factor: float) -> DerandResult:
    """Derandomized multi-orientation rounding; the estimator charges repairs per orientation."""
    est = ConditionalEstimator(inst, xs, primary, repair)
    shifts, phi = est.greedy_fix()
    hs, outcome = run_plan(inst, xs, shifts, primary, repair)
    lp_value = float(np.dot(inst.weights, _xs(xs)))
    result = DerandResult(hs, shifts, lp_value, bound_factor, phi, outcome)
    _check(result, outcome.estimator)
    if hs.cost > outcome.estimator + BOUND_SLACK:
        raise BoundViolation("union cost exceeds summed repair estimator")
    return result


def _check(result: DerandResult, realized: float) -> None:
    if abs(realized - result.phi[-1]) > MONOTONE_TOL * max(1.0, abs(realized)):
        raise BoundViolation(f"realized cost {realized} disagrees with final conditional value {result.phi[-1]}")
    if not result.hitting_set.feasible:
        raise BoundViolation("derandomized output is not a hitting set")
    if realized > result.bound + BOUND_SLACK:
        raise BoundViolation(
            f"cost {realized} exceeds bound {result.bound_factor:.6f} * {result.lp_value} = {result.bound}"
        )
