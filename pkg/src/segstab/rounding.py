"""Two-phase LP rounding for horizontal/vertical segment hitting.

Phase I rounds every horizontal line with a shifted lattice so each point is
taken with probability exactly ``x_p`` and every horizontal segment is hit.
Phase II splits each vertical line into maximal runs of Phase-I survivors and
solves the vertical segments inside every run exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .lp import LpSolution, solve_instance_lp
from .model import (
    HORIZONTAL,
    LINE,
    VERTICAL,
    Direction,
    Instance,
    LineKey,
    requirements,
    validate,
)
from .onedim import OneDimInstance, solve_1d

VARIANTS = ("weighted", "unweighted", "lines")
BOUNDS = {
    "weighted": 1 + 2 / math.e,
    "unweighted": 1 + 1 / (math.e - 1),
    "lines": 1 + 1 / math.e,
}
SNAP = 1e-12

ShiftAssignment = dict  # LineKey -> shift in [0, 1)


def _lattice_count(a: float, u: float) -> int:
    """Number of points of ``u + Z`` in ``[0, a)`` for ``a >= 0``."""
    v = a - u
    r = round(v)
    if abs(v - r) < SNAP:
        return int(r)
    return math.ceil(v)


def systematic_select(xs: Sequence[float], u: float) -> list[bool]:
    """Select item ``i`` iff ``[a_{i-1}, a_i)`` meets the lattice ``u + Z``."""
    out = []
    a = 0.0
    prev = _lattice_count(0.0, u)
    for v in xs:
        a += v
        cur = _lattice_count(a, u)
        out.append(cur > prev)
        prev = cur
    return out


def prefix_sums(xs: Sequence[float]) -> list[float]:
    out = [0.0]
    for v in xs:
        out.append(out[-1] + v)
    return out


@dataclass(frozen=True)
class Block:
    line: LineKey
    points: tuple[int, ...]
    segments: tuple[int, ...]


@dataclass(frozen=True)
class HittingSet:
    selected: tuple[int, ...]
    cost: float
    feasible: bool
    witness: dict = field(default_factory=dict, compare=False, repr=False)


def make_hitting_set(inst: Instance, selected: Iterable[int]) -> HittingSet:
    """Package a point set with its cost and a segment -> hitting point certificate."""
    sel = tuple(sorted(set(selected)))
    chosen = set(sel)
    witness: dict[int, int] = {}
    for sid, pts in enumerate(inst.index.seg_points):
        hit = next((p for p in pts if p in chosen), None)
        if hit is not None:
            witness[sid] = hit
    feasible = all(any(sid in witness for sid in req) for req in requirements(inst))
    cost = float(sum(inst.points[i].w for i in sel))
    return HittingSet(sel, cost, feasible, witness)


@dataclass(frozen=True)
class RoundingOutcome:
    shifts: dict
    phase1: frozenset
    blocks: tuple[Block, ...]
    phase2: frozenset
    phase1_weight: float
    phase2_weight: float
    block_picks: tuple[tuple[int, ...], ...] = ()


def direction_position(inst: Instance, direction: Direction) -> int:
    try:
        return inst.directions.index(direction)
    except ValueError:
        return len(inst.directions)


def draw_shifts(inst: Instance, seed: int, direction: Direction = HORIZONTAL) -> ShiftAssignment:
    """One uniform draw per line of ``direction``.

    The stream is ``SeedSequence(seed, spawn_key=(direction position,))`` and
    line ``i`` (in sorted line order) takes the ``i``-th draw, so shifts are
    reproducible across runs and platforms.
    """
    idx = inst.index
    idx.ensure(direction)
    keys = list(idx.lines[direction])
    ss = np.random.SeedSequence(seed, spawn_key=(direction_position(inst, direction),))
    draws = np.random.default_rng(ss).random(len(keys))
    return dict(zip(keys, draws.tolist()))


def round_direction(inst: Instance, x: Sequence[float], shifts: Mapping, direction: Direction) -> frozenset:
    """Systematic rounding along every line of ``direction``."""
    idx = inst.index
    idx.ensure(direction)
    chosen = []
    for key, pts in idx.lines[direction].items():
        if key not in shifts:
            raise KeyError(f"no shift for line {key}")
        picks = systematic_select([x[i] for i in pts], shifts[key])
        chosen.extend(p for p, take in zip(pts, picks) if take)
    return frozenset(chosen)


def phase1_round(inst: Instance, x, shifts: Mapping) -> frozenset:
    return round_direction(inst, _xs(x), shifts, HORIZONTAL)


def _xs(x) -> Sequence[float]:
    if isinstance(x, LpSolution):
        return x.x.tolist()
    return list(np.asarray(x, dtype=float))


def decompose_blocks(inst: Instance, selected: Iterable[int], direction: Direction = VERTICAL) -> list[Block]:
    """Maximal runs of unselected points on each line of ``direction``, with the
    segments of that direction lying wholly inside each run."""
    idx = inst.index
    idx.ensure(direction)
    sel = set(selected)
    by_line = idx.segments_by_line(direction)
    blocks = []
    for key, pts in idx.lines[direction].items():
        runs: list[list[int]] = []
        cur: list[int] = []
        for p in pts:
            if p in sel:
                if cur:
                    runs.append(cur)
                cur = []
            else:
                cur.append(p)
        if cur:
            runs.append(cur)
        if not runs:
            continue
        run_of = {}
        for r, run in enumerate(runs):
            for p in run:
                run_of[p] = r
        attached: list[list[int]] = [[] for _ in runs]
        for sid in by_line.get(key, ()):
            spts = idx.seg_points[sid]
            if spts and all(p not in sel for p in spts):
                attached[run_of[spts[0]]].append(sid)
        for run, segs in zip(runs, attached):
            blocks.append(Block(key, tuple(run), tuple(segs)))
    return blocks


def block_problem(inst: Instance, block: Block) -> OneDimInstance:
    idx = inst.index
    d = block.line.direction
    rank = idx.rank_of[d]
    base = rank[block.points[0]]
    pts = inst.points
    intervals = []
    for sid in block.segments:
        spts = idx.seg_points[sid]
        intervals.append((rank[spts[0]] - base, rank[spts[-1]] - base))
    return OneDimInstance(
        tuple(d.project(pts[i].x, pts[i].y) for i in block.points),
        tuple(pts[i].w for i in block.points),
        tuple(block.points),
        tuple(intervals),
    )


def solve_block(inst: Instance, block: Block, min_pick_lines: bool = False) -> tuple[tuple[int, ...], float]:
    """Exact repair of one block; memoized per instance since it ignores the shifts."""
    if not block.segments:
        return (), 0.0
    cache = inst.index._block_cache
    key = (block.line, block.points[0], block.points[-1], min_pick_lines)
    hit = cache.get(key)
    if hit is not None:
        return hit
    segs = inst.segments
    if min_pick_lines and all(segs[s].kind == LINE for s in block.segments):
        p = min(block.points, key=lambda i: (inst.points[i].w, i))
        res = ((p,), float(inst.points[p].w))
    else:
        res = solve_1d(block_problem(inst, block))
    cache[key] = res
    return res


def check_variant(inst: Instance, variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    problems = validate(inst, allow_lines=(variant == "lines"))
    if problems:
        raise ValueError("invalid instance: " + "; ".join(problems))
    if variant == "unweighted" and not inst.is_unit_weight():
        raise ValueError("unweighted variant requires every point weight to be 1")
    if variant == "lines":
        bad = [s.id for s in inst.segments if s.direction == VERTICAL and s.kind != LINE]
        if bad:
            raise ValueError(f"lines variant requires full vertical lines; segments {bad} are not")
    extra = [s.id for s in inst.segments if s.direction not in (HORIZONTAL, VERTICAL)]
    if extra:
        raise ValueError(f"segments {extra} are not axis-parallel; use the multi-orientation solver")


def run_with_shifts(inst: Instance, x, shifts: Mapping, variant: str = "weighted"):
    """Deterministic two-phase run for fixed shifts."""
    xs = _xs(x)
    phase1 = round_direction(inst, xs, shifts, HORIZONTAL)
    blocks = decompose_blocks(inst, phase1, VERTICAL)
    phase2: set[int] = set()
    picks = []
    w2 = 0.0
    for b in blocks:
        ids, cost = solve_block(inst, b, min_pick_lines=(variant == "lines"))
        picks.append(ids)
        phase2.update(ids)
        w2 += cost
    w1 = float(sum(inst.points[i].w for i in phase1))
    outcome = RoundingOutcome(dict(shifts), phase1, tuple(blocks), frozenset(phase2), w1, w2, tuple(picks))
    hs = make_hitting_set(inst, phase1 | phase2)
    return hs, outcome


def solve(
    inst: Instance,
    variant: str = "weighted",
    seed: int = 0,
    x: LpSolution | Sequence[float] | None = None,
    shifts: Mapping | None = None,
    check: bool = True,
):
    """Randomized two-phase algorithm; returns ``(HittingSet, RoundingOutcome)``."""
    if check:
        check_variant(inst, variant)
    if x is None:
        x = solve_instance_lp(inst)
    if shifts is None:
        shifts = draw_shifts(inst, seed, HORIZONTAL)
    return run_with_shifts(inst, x, shifts, variant)


def trial_costs(inst: Instance, variant: str, seeds: Iterable[int], x=None) -> list[tuple[float, float, float]]:
    """``(total, phase1, phase2)`` per seed, validating and solving the LP once."""
    check_variant(inst, variant)
    if x is None:
        x = solve_instance_lp(inst)
    xs = _xs(x)
    out = []
    for s in seeds:
        hs, oc = run_with_shifts(inst, xs, draw_shifts(inst, s), variant)
        out.append((hs.cost, oc.phase1_weight, oc.phase2_weight))
    return out


@dataclass(frozen=True)
class PlanOutcome:
    """Result of rounding several primary orientations and repairing the rest."""

    shifts: dict
    primary: frozenset
    repairs: dict  # Direction -> (blocks, picked point ids, cost)
    primary_weight: float
    repair_weight: float

    @property
    def estimator(self) -> float:
        """Primary weight plus the repair costs summed per orientation (overcounts shared picks)."""
        return self.primary_weight + self.repair_weight


def run_plan(
    inst: Instance,
    x,
    shifts: Mapping,
    primary: Sequence[Direction],
    repair: Sequence[Direction],
    min_pick_lines: bool = False,
):
    """Round every primary orientation, then repair each remaining orientation on the survivors.

    Repairs are computed independently per orientation and unioned.
    """
    xs = _xs(x)
    chosen: set[int] = set()
    for d in primary:
        chosen |= round_direction(inst, xs, shifts, d)
    primary_sel = frozenset(chosen)
    repairs = {}
    extra: set[int] = set()
    total = 0.0
    for d in repair:
        blocks = decompose_blocks(inst, primary_sel, d)
        picked: set[int] = set()
        cost = 0.0
        for b in blocks:
            ids, c = solve_block(inst, b, min_pick_lines)
            picked.update(ids)
            cost += c
        repairs[d] = (tuple(blocks), frozenset(picked), cost)
        extra |= picked
        total += cost
    w1 = float(sum(inst.points[i].w for i in primary_sel))
    outcome = PlanOutcome(dict(shifts), primary_sel, repairs, w1, total)
    return make_hitting_set(inst, primary_sel | extra), outcome
