"""Exact integer geometry for point/segment hitting-set instances.

Everything here works on integer coordinates; incidence and collinearity are
decided with integer cross products so there is no floating-point slack.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

SEGMENT = "segment"
LINE = "line"


class ParseError(ValueError):
    """Malformed instance document; ``location`` names the offending field."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass(frozen=True, order=True)
class Direction:
    dx: int
    dy: int

    @classmethod
    def of(cls, dx: int, dy: int) -> "Direction":
        """Reduce ``(dx, dy)`` to the primitive vector with canonical sign."""
        if dx == 0 and dy == 0:
            raise ValueError("zero direction vector")
        g = math.gcd(dx, dy)
        dx, dy = dx // g, dy // g
        if dx < 0 or (dx == 0 and dy < 0):
            dx, dy = -dx, -dy
        return cls(dx, dy)

    def is_canonical(self) -> bool:
        if (self.dx, self.dy) == (0, 0):
            return False
        return math.gcd(self.dx, self.dy) == 1 and (self.dx > 0 or (self.dx == 0 and self.dy > 0))

    def normal(self) -> tuple[int, int]:
        a, b = -self.dy, self.dx
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        return a, b

    def project(self, x: int, y: int) -> int:
        return self.dx * x + self.dy * y

    def __str__(self) -> str:
        return f"({self.dx},{self.dy})"


HORIZONTAL = Direction(1, 0)
VERTICAL = Direction(0, 1)


@dataclass(frozen=True, order=True)
class LineKey:
    """The line ``a*x + b*y = c`` running along ``direction``."""

    direction: Direction
    a: int
    b: int
    c: int

    @classmethod
    def through(cls, direction: Direction, x: int, y: int) -> "LineKey":
        a, b = direction.normal()
        return cls(direction, a, b, a * x + b * y)


@dataclass(frozen=True)
class PointRecord:
    id: int
    x: int
    y: int
    w: float = 1.0


@dataclass(frozen=True)
class SegmentRecord:
    id: int
    kind: str
    direction: Direction
    a: tuple[int, int]
    b: tuple[int, int] | None = None

    @property
    def is_line(self) -> bool:
        return self.kind == LINE

    def line_key(self) -> LineKey:
        return LineKey.through(self.direction, *self.a)


def cross(ox: int, oy: int, ax: int, ay: int, bx: int, by: int) -> int:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def incidence(p: PointRecord, s: SegmentRecord) -> bool:
    """True iff ``p`` lies on ``s`` (closed segment, or the whole line for full-lines)."""
    ax, ay = s.a
    if s.is_line:
        return s.direction.dx * (p.y - ay) - s.direction.dy * (p.x - ax) == 0
    bx, by = s.b
    if cross(ax, ay, bx, by, p.x, p.y) != 0:
        return False
    return min(ax, bx) <= p.x <= max(ax, bx) and min(ay, by) <= p.y <= max(ay, by)


@dataclass(frozen=True)
class Instance:
    points: tuple[PointRecord, ...]
    segments: tuple[SegmentRecord, ...]
    directions: tuple[Direction, ...]
    objects: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def build(
        cls,
        points: Iterable[PointRecord],
        segments: Iterable[SegmentRecord],
        directions: Iterable[Direction] | None = None,
        objects: Iterable[Iterable[int]] | None = None,
    ) -> "Instance":
        points = tuple(points)
        segments = tuple(segments)
        if directions is None:
            seen: list[Direction] = []
            for s in segments:
                if s.direction not in seen:
                    seen.append(s.direction)
            directions = seen
        objs = None if objects is None else tuple(tuple(o) for o in objects)
        return cls(points, segments, tuple(directions), objs)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def weights(self) -> list[float]:
        return [p.w for p in self.points]

    def is_unit_weight(self) -> bool:
        return all(p.w == 1 for p in self.points)

    @cached_property
    def index(self) -> "InstanceIndex":
        return InstanceIndex(self)


@dataclass(eq=False, repr=False)
class InstanceIndex:
    """Derived incidence tables, computed once per instance and shared by solvers."""

    inst: Instance
    seg_points: list[tuple[int, ...]] = field(init=False)
    lines: dict[Direction, dict[LineKey, tuple[int, ...]]] = field(init=False)
    line_of: dict[Direction, list[LineKey]] = field(init=False)
    rank_of: dict[Direction, list[int]] = field(init=False)

    def __post_init__(self) -> None:
        inst = self.inst
        self.lines = {}
        self.line_of = {}
        self.rank_of = {}
        dirs = list(inst.directions)
        for s in inst.segments:
            if s.direction not in dirs:
                dirs.append(s.direction)
        for d in dirs:
            self._index_direction(d)
        # points of a segment live on its line, so only scan that line
        self.seg_points = []
        for s in inst.segments:
            members = self.lines[s.direction].get(s.line_key(), ())
            self.seg_points.append(tuple(i for i in members if incidence(inst.points[i], s)))
        self._block_cache: dict[tuple, tuple[tuple[int, ...], float]] = {}

    def _index_direction(self, d: Direction) -> None:
        groups: dict[LineKey, list[int]] = {}
        for p in self.inst.points:
            groups.setdefault(LineKey.through(d, p.x, p.y), []).append(p.id)
        ordered: dict[LineKey, tuple[int, ...]] = {}
        line_of = [None] * self.inst.n
        rank_of = [0] * self.inst.n
        for key in sorted(groups):
            ids = sorted(groups[key], key=lambda i: d.project(self.inst.points[i].x, self.inst.points[i].y))
            ordered[key] = tuple(ids)
            for r, i in enumerate(ids):
                line_of[i] = key
                rank_of[i] = r
        self.lines[d] = ordered
        self.line_of[d] = line_of
        self.rank_of[d] = rank_of

    def ensure(self, d: Direction) -> None:
        if d not in self.lines:
            self._index_direction(d)

    def segments_of(self, d: Direction) -> list[int]:
        return [s.id for s in self.inst.segments if s.direction == d]

    def segments_by_line(self, d: Direction) -> dict[LineKey, list[int]]:
        out: dict[LineKey, list[int]] = {}
        for sid in self.segments_of(d):
            out.setdefault(self.inst.segments[sid].line_key(), []).append(sid)
        return out


def group_by_line(inst: Instance, direction: Direction) -> dict[LineKey, list[int]]:
    """Partition all points into lines of ``direction``, each ordered by projection."""
    idx = inst.index
    idx.ensure(direction)
    return {k: list(v) for k, v in idx.lines[direction].items()}


def requirements(inst: Instance) -> list[tuple[int, ...]]:
    """Alternatives that must each be hit: every object, then every segment outside all objects."""
    reqs: list[tuple[int, ...]] = []
    grouped: set[int] = set()
    for obj in inst.objects or ():
        reqs.append(tuple(obj))
        grouped.update(obj)
    reqs.extend((s.id,) for s in inst.segments if s.id not in grouped)
    return reqs


def hits_all(inst: Instance, selected: Iterable[int]) -> bool:
    """Independent feasibility re-check straight from the incidence predicate."""
    chosen = [inst.points[i] for i in set(selected)]
    return all(
        any(incidence(p, inst.segments[sid]) for sid in req for p in chosen) for req in requirements(inst)
    )


def unhit_segments(inst: Instance, selected: Iterable[int]) -> list[int]:
    chosen = set(selected)
    return [s.id for s, pts in zip(inst.segments, inst.index.seg_points) if not chosen.intersection(pts)]


def validate(inst: Instance, allow_lines: bool = False) -> list[str]:
    """Collect every invariant violation; never raises."""
    out: list[str] = []
    seen_xy: dict[tuple[int, int], int] = {}
    for i, p in enumerate(inst.points):
        if p.id != i:
            out.append(f"point {p.id}: id out of sequence (expected {i})")
        if not isinstance(p.x, int) or not isinstance(p.y, int):
            out.append(f"point {p.id}: non-integer coordinates")
        if not math.isfinite(p.w) or p.w < 0:
            out.append(f"point {p.id}: weight {p.w} is not a finite non-negative number")
        if (p.x, p.y) in seen_xy:
            out.append(f"point {p.id}: duplicates coordinates of point {seen_xy[(p.x, p.y)]}")
        else:
            seen_xy[(p.x, p.y)] = p.id
    for d in inst.directions:
        if not d.is_canonical():
            out.append(f"direction {d}: not primitive with canonical sign")
    if len(set(inst.directions)) != len(inst.directions):
        out.append("directions: repeated entry")
    geometry_ok = True
    for i, s in enumerate(inst.segments):
        if s.id != i:
            out.append(f"segment {s.id}: id out of sequence (expected {i})")
        if s.direction not in inst.directions:
            out.append(f"segment {s.id}: direction {s.direction} not declared")
        if s.kind not in (SEGMENT, LINE):
            out.append(f"segment {s.id}: unknown kind {s.kind!r}")
            geometry_ok = False
            continue
        if s.is_line:
            if not allow_lines:
                out.append(f"segment {s.id}: full lines are not permitted for this variant")
            continue
        if s.b is None or tuple(s.a) == tuple(s.b):
            out.append(f"segment {s.id}: degenerate or missing endpoint")
            geometry_ok = False
            continue
        dx, dy = s.b[0] - s.a[0], s.b[1] - s.a[1]
        if s.direction.dx * dy - s.direction.dy * dx != 0:
            out.append(f"segment {s.id}: endpoints not aligned with direction {s.direction}")
            geometry_ok = False
    if geometry_ok:
        for s, pts in zip(inst.segments, inst.index.seg_points):
            if not pts:
                out.append(f"segment {s.id}: contains no point")
    if inst.objects is not None:
        nseg = len(inst.segments)
        for j, obj in enumerate(inst.objects):
            if not obj:
                out.append(f"object {j}: empty")
            for sid in obj:
                if not (0 <= sid < nseg):
                    out.append(f"object {j}: unknown segment id {sid}")
    return out


def transpose(inst: Instance) -> Instance:
    """Mirror across the diagonal, so horizontal and vertical roles swap."""
    def flip_dir(d: Direction) -> Direction:
        return Direction.of(d.dy, d.dx)

    pts = [PointRecord(p.id, p.y, p.x, p.w) for p in inst.points]
    segs = [
        SegmentRecord(
            s.id, s.kind, flip_dir(s.direction), (s.a[1], s.a[0]), None if s.b is None else (s.b[1], s.b[0])
        )
        for s in inst.segments
    ]
    return Instance.build(pts, segs, [flip_dir(d) for d in inst.directions], inst.objects)


# serialization ---------------------------------------------------------------


def to_document(inst: Instance) -> dict:
    doc: dict = {
        "points": [{"id": p.id, "x": p.x, "y": p.y, "w": p.w} for p in inst.points],
        "segments": [],
        "directions": [[d.dx, d.dy] for d in inst.directions],
    }
    for s in inst.segments:
        rec = {"id": s.id, "kind": s.kind, "dir": [s.direction.dx, s.direction.dy], "a": list(s.a)}
        if s.b is not None:
            rec["b"] = list(s.b)
        doc["segments"].append(rec)
    if inst.objects is not None:
        doc["objects"] = [list(o) for o in inst.objects]
    return doc


def serialize(inst: Instance) -> str:
    return json.dumps(to_document(inst), indent=1)


def _field(rec: dict, key: str, where: str, required: bool = True):
    if key not in rec:
        if required:
            raise ParseError(f"{where}.{key}", "missing field")
        return None
    return rec[key]


def _int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(where, f"expected integer, got {v!r}")
    return v


def _pair(v, where: str) -> tuple[int, int]:
    if not isinstance(v, list) or len(v) != 2:
        raise ParseError(where, f"expected [int, int], got {v!r}")
    return _int(v[0], f"{where}[0]"), _int(v[1], f"{where}[1]")


def from_document(doc) -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("$", "top level must be an object")
    if "points" not in doc:
        raise ParseError("points", "missing field")
    if "segments" not in doc:
        raise ParseError("segments", "missing field")
    points = []
    for i, rec in enumerate(doc["points"]):
        where = f"points[{i}]"
        if not isinstance(rec, dict):
            raise ParseError(where, "expected object")
        w = _field(rec, "w", where, required=False)
        if w is None:
            w = 1.0
        if isinstance(w, bool) or not isinstance(w, (int, float)):
            raise ParseError(f"{where}.w", f"expected number, got {w!r}")
        points.append(
            PointRecord(
                _int(_field(rec, "id", where), f"{where}.id"),
                _int(_field(rec, "x", where), f"{where}.x"),
                _int(_field(rec, "y", where), f"{where}.y"),
                float(w),
            )
        )
    segments = []
    for i, rec in enumerate(doc["segments"]):
        where = f"segments[{i}]"
        if not isinstance(rec, dict):
            raise ParseError(where, "expected object")
        kind = _field(rec, "kind", where, required=False) or SEGMENT
        if kind not in (SEGMENT, LINE):
            raise ParseError(f"{where}.kind", f"expected 'segment' or 'line', got {kind!r}")
        try:
            direction = Direction.of(*_pair(_field(rec, "dir", where), f"{where}.dir"))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"{where}.dir", str(exc)) from None
        a = _pair(_field(rec, "a", where), f"{where}.a")
        b = None
        if kind == SEGMENT:
            b = _pair(_field(rec, "b", where), f"{where}.b")
        segments.append(SegmentRecord(_int(_field(rec, "id", where), f"{where}.id"), kind, direction, a, b))
    directions = None
    if "directions" in doc:
        directions = [Direction(*_pair(v, f"directions[{i}]")) for i, v in enumerate(doc["directions"])]
    objects = None
    if doc.get("objects") is not None:
        objects = []
        for j, obj in enumerate(doc["objects"]):
            if not isinstance(obj, list):
                raise ParseError(f"objects[{j}]", "expected list of segment ids")
            objects.append([_int(v, f"objects[{j}][{t}]") for t, v in enumerate(obj)])
    return Instance.build(points, segments, directions, objects)


def parse(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_document(doc)


def load(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(inst))
        fh.write("\n")


def make_segment(sid: int, a: Sequence[int], b: Sequence[int]) -> SegmentRecord:
    """Segment from ``a`` to ``b`` with its direction inferred."""
    return SegmentRecord(sid, SEGMENT, Direction.of(b[0] - a[0], b[1] - a[1]), tuple(a), tuple(b))


def make_line(sid: int, direction: Direction, anchor: Sequence[int]) -> SegmentRecord:
    return SegmentRecord(sid, LINE, direction, tuple(anchor), None)
