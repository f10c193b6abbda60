import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from segstab.derand import candidate_intervals
from segstab.fixtures import gen_gap, gen_gap_family, gen_grid, gen_random
from segstab.lp import solve_instance_lp
from segstab.model import HORIZONTAL, VERTICAL, Instance, PointRecord, hits_all, make_line, make_segment
from segstab.onedim import brute_1d
from segstab.rounding import (
    BOUNDS,
    block_problem,
    check_variant,
    decompose_blocks,
    draw_shifts,
    phase1_round,
    prefix_sums,
    run_with_shifts,
    solve,
    solve_block,
    systematic_select,
    trial_costs,
)

from corpus import LINE_GAPS, SPARSE, WEIGHTED_GAPS

fractions = st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=1, max_size=12)


def test_systematic_select_half_grid():
    assert [i for i, s in enumerate(systematic_select([0.5] * 6, 0.25)) if s] == [0, 2, 4]
    assert [i for i, s in enumerate(systematic_select([0.5] * 6, 0.75)) if s] == [1, 3, 5]


def test_values_one_and_zero():
    for u in (0.0, 0.3, 0.999):
        assert systematic_select([1.0, 0.0, 1.0], u) == [True, False, True]


@given(fractions)
def test_marginals_are_exact(xs):
    # the pattern is constant on each breakpoint interval, so the selection measure is a finite sum;
    # breakpoints closer than the merge tolerance are fused, which can misplace that much mass
    measure = np.zeros(len(xs))
    for lo, hi in candidate_intervals(xs):
        pat = systematic_select(xs, (lo + hi) / 2)
        if hi - lo > 1e-6:
            for u in np.linspace(lo, hi, 5)[1:-1]:
                assert systematic_select(xs, float(u)) == pat
        measure += (hi - lo) * np.asarray(pat, dtype=float)
    assert measure == pytest.approx(xs, abs=1e-8 + 2e-9 * len(xs))


@given(fractions, st.floats(0.0, 1.0, exclude_max=True))
def test_heavy_window_is_always_hit(xs, u):
    sel = systematic_select(xs, u)
    a = prefix_sums(xs)
    n = len(xs)
    selected_count = sum(sel)
    assert abs(selected_count - a[-1]) <= 1 + 1e-9
    for i in range(n):
        for j in range(i, n):
            if a[j + 1] - a[i] >= 1 - 1e-12:
                assert any(sel[i : j + 1])


def test_draw_shifts_reproducible_and_split_by_direction():
    inst = gen_gap()
    a = draw_shifts(inst, 5)
    assert a == draw_shifts(inst, 5)
    assert a != draw_shifts(inst, 6)
    assert all(0.0 <= u < 1.0 for u in a.values())
    assert len(a) == 4
    v = draw_shifts(inst, 5, VERTICAL)
    assert len(v) == 6
    assert set(v.values()).isdisjoint(a.values())


def test_phase1_hits_every_horizontal_segment_on_gap():
    inst = gen_gap()
    x = solve_instance_lp(inst)
    for seed in range(50):
        sel = phase1_round(inst, x, draw_shifts(inst, seed))
        for s, pts in zip(inst.segments, inst.index.seg_points):
            if s.direction == HORIZONTAL:
                assert sel.intersection(pts)


@given(st.integers(0, 10_000))
def test_blocks_are_maximal_unselected_runs(seed):
    inst = gen_gap_family(WEIGHTED_GAPS, seed)
    x = solve_instance_lp(inst)
    sel = phase1_round(inst, x, draw_shifts(inst, seed))
    blocks = decompose_blocks(inst, sel)
    idx = inst.index
    covered = set()
    for b in blocks:
        assert not sel.intersection(b.points)
        ranks = [idx.rank_of[VERTICAL][p] for p in b.points]
        assert ranks == list(range(ranks[0], ranks[0] + len(ranks)))
        line = idx.lines[VERTICAL][b.line]
        lo, hi = ranks[0], ranks[-1]
        assert lo == 0 or line[lo - 1] in sel
        assert hi == len(line) - 1 or line[hi + 1] in sel
        covered.update(b.points)
        for sid in b.segments:
            assert set(idx.seg_points[sid]) <= set(b.points)
    assert covered == set(range(inst.n)) - sel
    # every vertical segment missed by phase I sits in exactly one block
    missed = [s.id for s, pts in zip(inst.segments, idx.seg_points) if s.direction == VERTICAL and not sel.intersection(pts)]
    assert sorted(sid for b in blocks for sid in b.segments) == sorted(missed)


@given(st.integers(0, 10_000))
def test_block_solve_is_optimal(seed):
    inst = gen_gap_family(WEIGHTED_GAPS, seed)
    x = solve_instance_lp(inst)
    sel = phase1_round(inst, x, draw_shifts(inst, seed))
    for b in decompose_blocks(inst, sel):
        ids, cost = solve_block(inst, b)
        assert cost == pytest.approx(brute_1d(block_problem(inst, b)))
        assert set(ids) <= set(b.points)


@pytest.mark.parametrize("variant", ["weighted", "unweighted"])
def test_solve_is_feasible_on_grids(variant):
    for k in (2, 3):
        inst = gen_grid(k)
        for seed in range(5):
            hs, oc = solve(inst, variant, seed=seed)
            assert hs.feasible and hits_all(inst, hs.selected)
            assert hs.cost == pytest.approx(oc.phase1_weight + oc.phase2_weight)


def test_lines_variant_picks_cheapest_point_per_unhit_line():
    pts = [PointRecord(0, 0, 0, 1.0), PointRecord(1, 0, 1, 0.5), PointRecord(2, 0, 2, 0.5), PointRecord(3, 1, 3, 1.0)]
    segs = [make_line(0, VERTICAL, (0, 0)), make_line(1, VERTICAL, (1, 0))]
    inst = Instance.build(pts, segs, [HORIZONTAL, VERTICAL])
    hs, oc = solve(inst, "lines", x=[0.0, 0.0, 0.0, 0.0])
    assert oc.phase1 == frozenset()
    assert set(hs.selected) == {1, 3}
    assert hs.cost == pytest.approx(1.5)


def test_check_variant_errors():
    with pytest.raises(ValueError, match="unknown variant"):
        check_variant(gen_gap(), "fancy")
    heavy = gen_gap_family(WEIGHTED_GAPS, 1)
    with pytest.raises(ValueError, match="weight to be 1"):
        check_variant(heavy, "unweighted")
    with pytest.raises(ValueError, match="full vertical lines"):
        check_variant(gen_gap(), "lines")
    with pytest.raises(ValueError, match="not permitted"):
        check_variant(gen_gap_family(LINE_GAPS, 0), "weighted")
    diag = Instance.build([PointRecord(0, 0, 0), PointRecord(1, 1, 1)], [make_segment(0, (0, 0), (1, 1))])
    with pytest.raises(ValueError, match="axis-parallel"):
        check_variant(diag, "weighted")


def test_trial_costs_match_solve():
    inst = gen_random(SPARSE, 4)
    x = solve_instance_lp(inst)
    rows = trial_costs(inst, "weighted", range(4), x)
    for seed, (total, w1, w2) in enumerate(rows):
        hs, _ = solve(inst, "weighted", seed=seed, x=x)
        assert total == hs.cost
        assert total == pytest.approx(w1 + w2)


def test_bound_constants():
    assert BOUNDS["weighted"] == pytest.approx(1.7357588823)
    assert BOUNDS["unweighted"] == pytest.approx(1.5819767069)
    assert BOUNDS["lines"] == pytest.approx(1.3678794412)
    assert BOUNDS["lines"] < BOUNDS["unweighted"] < BOUNDS["weighted"]


def test_run_with_shifts_requires_every_line():
    inst = gen_gap()
    with pytest.raises(KeyError):
        run_with_shifts(inst, [0.5] * 16, {}, "weighted")
