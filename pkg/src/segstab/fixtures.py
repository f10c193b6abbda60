"""Instance generators and the grid tightness benchmark."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .lp import uniform_solution
from .model import (
    HORIZONTAL,
    VERTICAL,
    Direction,
    Instance,
    PointRecord,
    SegmentRecord,
    SEGMENT,
    make_line,
)
from .rounding import draw_shifts, run_with_shifts

GAP_COORDS = (
    [(x, 3) for x in range(6)]
    + [(2, 2), (4, 2), (1, 1), (3, 1)]
    + [(x, 0) for x in range(6)]
)
GAP_HORIZONTAL = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (6, 7), (8, 9), (10, 11), (11, 12), (12, 13), (13, 14), (14, 15)]
GAP_VERTICAL = [(0, 10), (1, 8), (8, 11), (2, 6), (6, 12), (3, 9), (9, 13), (4, 7), (7, 14), (5, 15)]


def _seg(sid: int, a, b, d: Direction) -> SegmentRecord:
    return SegmentRecord(sid, SEGMENT, d, tuple(a), tuple(b))


def gen_gap() -> Instance:
    """16 points and 22 two-point segments with LP = 8 and OPT = 10."""
    pts = [PointRecord(i, x, y, 1.0) for i, (x, y) in enumerate(GAP_COORDS)]
    segs = []
    for u, v in GAP_HORIZONTAL:
        segs.append(_seg(len(segs), GAP_COORDS[u], GAP_COORDS[v], HORIZONTAL))
    for u, v in GAP_VERTICAL:
        # listed top point first; store bottom-to-top
        a, b = sorted([GAP_COORDS[u], GAP_COORDS[v]], key=lambda c: c[1])
        segs.append(_seg(len(segs), a, b, VERTICAL))
    return Instance.build(pts, segs, [HORIZONTAL, VERTICAL])


@dataclass(frozen=True)
class GridParams:
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("grid family needs k >= 2")

    @property
    def n(self) -> int:
        return self.k * self.k


def gen_grid(k: int) -> Instance:
    """``k^2 x k^2`` unit grid with every length-``k`` window in both axes."""
    n = GridParams(k).n
    pts = [PointRecord(j * n + i, i, j, 1.0) for j in range(n) for i in range(n)]
    segs = []
    for j in range(n):
        for i in range(n - k + 1):
            segs.append(_seg(len(segs), (i, j), (i + k - 1, j), HORIZONTAL))
    for i in range(n):
        for j in range(n - k + 1):
            segs.append(_seg(len(segs), (i, j), (i, j + k - 1), VERTICAL))
    return Instance.build(pts, segs, [HORIZONTAL, VERTICAL])


def grid_diagonal_solution(k: int) -> list[int]:
    n = k * k
    return [j * n + i for j in range(n) for i in range(n) if (j - i) % k == 0]


@dataclass(frozen=True)
class RandomProfile:
    npoints: int = 12
    grid: int = 6
    directions: tuple[tuple[int, int], ...] = ((1, 0), (0, 1))
    density: float = 0.7
    max_segments_per_line: int = 2
    max_span: int = 3
    min_span: int = 1
    weight_range: tuple[float, float] = (1.0, 1.0)
    integer_weights: bool = False
    full_line_directions: tuple[tuple[int, int], ...] = ()
    object_size: int = 0


def gen_random(profile: RandomProfile, seed: int) -> Instance:
    """Random valid instance; every segment is spanned between existing points."""
    rng = np.random.default_rng(seed)
    g = profile.grid
    if profile.npoints > g * g:
        raise ValueError("more points than grid cells")
    cells = rng.choice(g * g, size=profile.npoints, replace=False)
    lo, hi = profile.weight_range
    pts = []
    for i, c in enumerate(cells.tolist()):
        if profile.integer_weights:
            w = float(rng.integers(int(lo), int(hi) + 1))
        else:
            w = float(rng.uniform(lo, hi)) if hi > lo else float(lo)
        pts.append(PointRecord(i, c % g, c // g, w))
    dirs = [Direction.of(*d) for d in profile.directions]
    full = {Direction.of(*d) for d in profile.full_line_directions}
    tmp = Instance.build(pts, [], dirs)
    idx = tmp.index
    segs: list[SegmentRecord] = []
    for d in dirs:
        idx.ensure(d)
        for key, members in idx.lines[d].items():
            if d in full:
                if rng.random() < profile.density:
                    p = pts[members[0]]
                    segs.append(make_line(len(segs), d, (p.x, p.y)))
                continue
            if rng.random() >= profile.density:
                continue
            count = int(rng.integers(1, profile.max_segments_per_line + 1))
            for _ in range(count):
                span = int(rng.integers(profile.min_span, profile.max_span + 1))
                start = int(rng.integers(0, max(1, len(members) - span + 1)))
                run = members[start : start + span]
                a = (pts[run[0]].x, pts[run[0]].y)
                if len(run) > 1:
                    b = (pts[run[-1]].x, pts[run[-1]].y)
                else:
                    b = (a[0] + d.dx, a[1] + d.dy)
                segs.append(_seg(len(segs), a, b, d))
    objects = None
    if profile.object_size > 0 and segs:
        order = rng.permutation(len(segs)).tolist()
        objects = []
        while order:
            size = int(rng.integers(1, profile.object_size + 1))
            objects.append(sorted(order[:size]))
            order = order[size:]
    return Instance.build(pts, segs, dirs, objects)


@dataclass(frozen=True)
class GapFamily:
    """Randomly perturbed copies of the gap instance: a source of fractional LP vertices."""

    copies: int = 2
    drop: float = 0.1
    extra: int = 2
    weight_range: tuple[float, float] = (1.0, 1.0)
    vertical_lines: bool = False


def gen_gap_family(profile: GapFamily, seed: int) -> Instance:
    """Copies shifted right by 7 (sharing horizontal lines), some edges dropped, a few 3-point horizontals added.

    With ``vertical_lines`` every vertical segment is replaced by the full
    vertical line through it, one per column.
    """
    rng = np.random.default_rng(seed)
    lo, hi = profile.weight_range
    pts: list[PointRecord] = []
    segs: list[SegmentRecord] = []
    columns = set()
    for c in range(profile.copies):
        dx = 7 * c
        base = len(pts)
        for x, y in GAP_COORDS:
            w = float(rng.uniform(lo, hi)) if hi > lo else float(lo)
            pts.append(PointRecord(len(pts), x + dx, y, w))

        def at(i):
            q = pts[base + i]
            return (q.x, q.y)

        for u, v in GAP_HORIZONTAL:
            if rng.random() >= profile.drop:
                segs.append(_seg(len(segs), at(u), at(v), HORIZONTAL))
        for u, v in GAP_VERTICAL:
            if profile.vertical_lines:
                columns.add(at(u)[0])
            elif rng.random() >= profile.drop:
                a, b = sorted([at(u), at(v)], key=lambda q: q[1])
                segs.append(_seg(len(segs), a, b, VERTICAL))
        for _ in range(profile.extra):
            row = (0, 10)[int(rng.integers(0, 2))]
            start = int(rng.integers(0, 4))
            segs.append(_seg(len(segs), at(row + start), at(row + start + 2), HORIZONTAL))
    for xcol in sorted(columns):
        segs.append(make_line(len(segs), VERTICAL, (xcol, 0)))
    return Instance.build(pts, segs, [HORIZONTAL, VERTICAL])


# tightness benchmark --------------------------------------------------------------


def tightness_lower(k: int) -> float:
    a = (1 - 1 / k) ** k
    return a * (1 - a**k) / (1 - a) - a / (k * (1 - a) ** 2)


def tightness_expected(k: int) -> float:
    """Exact ``E[phase II] / OPT`` under the uniform optimum: ``sum_a (k-a+1) alpha^a / k``."""
    a = (1 - 1 / k) ** k
    return sum((k - j + 1) * a**j for j in range(1, k + 1)) / k


@dataclass
class TightnessReport:
    k: int
    alpha: float
    empirical: float
    sigma: float
    lower: float
    upper: float
    expected: float
    trials: int
    opt: int
    phase1_constant: bool
    phase2_costs: list[float] = field(default_factory=list, repr=False)

    def inside(self, nsigma: float = 3.0) -> bool:
        return self.lower - nsigma * self.sigma <= self.empirical <= self.upper + nsigma * self.sigma

    def to_json(self) -> str:
        d = asdict(self)
        d.pop("phase2_costs")
        return json.dumps(d, indent=2)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["trial", "phase2_cost"])
            for t, c in enumerate(self.phase2_costs):
                w.writerow([t, c])


def bench_tightness(k: int, trials: int, seed: int = 0) -> TightnessReport:
    """Run the unweighted pipeline on the grid family with ``x = 1/k`` injected."""
    if not 3 <= k <= 7:
        raise ValueError("bench_tightness runs k in [3, 7]")
    if trials < 500:
        raise ValueError("bench_tightness needs at least 500 trials")
    inst = gen_grid(k)
    x = uniform_solution(inst, 1.0 / k).x.tolist()
    opt = k**3
    costs = []
    phase1_constant = True
    for t in range(trials):
        shifts = draw_shifts(inst, [seed, t])
        _, oc = run_with_shifts(inst, x, shifts, "unweighted")
        costs.append(oc.phase2_weight)
        phase1_constant &= len(oc.phase1) == opt
    arr = np.asarray(costs) / opt
    return TightnessReport(
        k=k,
        alpha=(1 - 1 / k) ** k,
        empirical=float(arr.mean()),
        sigma=float(arr.std(ddof=1) / math.sqrt(trials)),
        lower=tightness_lower(k),
        upper=1 / (math.e - 1),
        expected=tightness_expected(k),
        trials=trials,
        opt=opt,
        phase1_constant=phase1_constant,
        phase2_costs=costs,
    )
