import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from segstab.fixtures import RandomProfile, gen_gap, gen_grid, gen_random
from segstab.model import HORIZONTAL, VERTICAL, Instance, PointRecord, hits_all, make_line, make_segment
from segstab.search import (
    brute_force_opt,
    greedy_cover,
    is_locally_optimal,
    local_search,
    requirement_masks,
    restriction_k,
    segments_intersect,
)

SMALL = RandomProfile(npoints=12, grid=5, min_span=2, max_span=3)


def exhaustive_opt(inst):
    best = None
    for r in range(inst.n + 1):
        for combo in itertools.combinations(range(inst.n), r):
            if hits_all(inst, combo):
                c = sum(inst.points[i].w for i in combo)
                if best is None or c < best:
                    best = c
        if best is not None and all(p.w == 1 for p in inst.points):
            return best
    return best


def crossing_lines(inst, sid):
    """Independent count: lines of the other axis holding a segment that shares a lattice point with ``sid``."""
    s = inst.segments[sid]

    def cells(seg):
        (ax, ay), (bx, by) = seg.a, seg.b
        return {(x, y) for x in range(min(ax, bx), max(ax, bx) + 1) for y in range(min(ay, by), max(ay, by) + 1)}

    mine = cells(s)
    return len({t.line_key() for t in inst.segments if t.direction != s.direction and cells(t) & mine})


@pytest.mark.parametrize(
    "a,b,c,d,expect",
    [
        ((0, 0), (4, 0), (2, -1), (2, 3), True),
        ((0, 0), (4, 0), (5, -1), (5, 3), False),
        ((0, 0), (4, 0), (4, 0), (4, 3), True),
        ((0, 0), (2, 2), (0, 2), (2, 0), True),
        ((0, 0), (1, 1), (1, 0), (2, -1), False),
        ((0, 0), (4, 0), (2, 0), (6, 0), True),
        ((0, 0), (1, 0), (2, 0), (3, 0), False),
    ],
)
def test_segments_intersect(a, b, c, d, expect):
    s, t = make_segment(0, a, b), make_segment(1, c, d)
    assert segments_intersect(s, t) is expect
    assert segments_intersect(t, s) is expect


def test_line_intersections():
    ln = make_line(0, VERTICAL, (3, 0))
    assert segments_intersect(ln, make_segment(1, (0, 5), (3, 5)))
    assert not segments_intersect(ln, make_segment(1, (0, 5), (2, 5)))
    assert segments_intersect(ln, make_line(2, HORIZONTAL, (0, 9)))
    assert not segments_intersect(ln, make_line(2, VERTICAL, (4, 0)))


def test_restriction_of_gap_and_grid():
    gap = gen_gap()
    prof = restriction_k(gap)
    assert prof.counts == tuple(crossing_lines(gap, s.id) for s in gap.segments)
    assert prof.k == 3
    assert restriction_k(gen_grid(2)).k == 2
    assert restriction_k(gen_grid(3)).k == 3


def test_restriction_without_crossings_is_zero():
    inst = Instance.build(
        [PointRecord(0, 0, 0), PointRecord(1, 1, 0), PointRecord(2, 5, 5), PointRecord(3, 5, 6)],
        [make_segment(0, (0, 0), (1, 0)), make_segment(1, (5, 5), (5, 6))],
    )
    assert restriction_k(inst).k == 0


@given(st.integers(0, 10_000))
def test_restriction_matches_lattice_count(seed):
    # axis-parallel segments between lattice points cross exactly when they share a lattice point
    inst = gen_random(SMALL, seed)
    prof = restriction_k(inst)
    assert prof.counts == tuple(crossing_lines(inst, s.id) for s in inst.segments)


def test_brute_force_on_gap():
    sel, cost = brute_force_opt(gen_gap())
    assert cost == 10
    assert hits_all(gen_gap(), sel)


def test_brute_force_single_point_and_cap():
    inst = Instance.build([PointRecord(0, 2, 2, 3.0)], [make_segment(0, (2, 2), (3, 2))])
    assert brute_force_opt(inst) == ((0,), 3.0)
    with pytest.raises(ValueError, match="capped"):
        brute_force_opt(gen_grid(2), cap=15)


@given(st.integers(0, 10_000), st.booleans())
def test_brute_force_matches_enumeration(seed, weighted):
    prof = RandomProfile(npoints=10, grid=5, min_span=1, max_span=3, weight_range=(0.5, 3.0) if weighted else (1.0, 1.0))
    inst = gen_random(prof, seed)
    sel, cost = brute_force_opt(inst)
    assert hits_all(inst, sel)
    assert cost == pytest.approx(exhaustive_opt(inst))


def test_local_search_single_segment():
    inst = Instance.build([PointRecord(i, i, 0) for i in range(3)], [make_segment(0, (0, 0), (2, 0))])
    hs = local_search(inst, t=1, init=range(3))
    assert hs.cost == 1 and hs.feasible


def test_local_search_on_gap():
    inst = gen_gap()
    hist = []
    hs = local_search(inst, t=3, init=range(16), history=hist)
    assert hs.feasible and hs.cost >= 10
    assert is_locally_optimal(inst, hs.selected, 3)
    assert hist[0] == 16 and all(b < a for a, b in zip(hist, hist[1:]))


@given(st.integers(0, 10_000))
def test_local_search_sandwich(seed):
    inst = gen_random(SMALL, seed)
    init = greedy_cover(inst)
    hs = local_search(inst, t=3, init=init)
    assert hs.feasible and hits_all(inst, hs.selected)
    assert is_locally_optimal(inst, hs.selected, 3)
    assert brute_force_opt(inst)[1] <= hs.cost <= init.cost


def test_local_search_strictly_improves_all_points():
    inst = gen_random(SMALL, 3)
    hs = local_search(inst, t=2, init=range(inst.n))
    assert hs.cost < inst.n


def test_local_search_errors_and_warning():
    heavy = gen_random(RandomProfile(weight_range=(1.0, 2.0)), 0)
    with pytest.raises(ValueError, match="unit weights"):
        local_search(heavy)
    inst = gen_gap()
    with pytest.raises(ValueError, match="not feasible"):
        local_search(inst, init=[0])
    with pytest.warns(RuntimeWarning):
        local_search(inst, t=4, init=brute_force_opt(inst)[0])


def test_greedy_is_feasible_and_masks_are_independent():
    inst = gen_gap()
    assert greedy_cover(inst).feasible
    masks = requirement_masks(inst)
    assert sorted(bin(m).count("1") for m in masks) == [2] * 22
