"""Natural covering LP of a hitting-set instance and a small dense simplex for it.

The LP is ``min w.x  s.t.  sum_{p in s} x_p >= 1 for every row s, 0 <= x <= 1``.
Rows come from segments, or from objects (unions of segments) when the
instance carries them.

The solver is a bounded-variable primal simplex on the tableau of
``A x - s = 1``.  Starting every ``x_p`` at its upper bound 1 makes the surplus
basis feasible whenever each row is non-empty, so no phase I is needed.
Bland's rule picks entering and leaving variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import Instance

FEAS_TOL = 1e-7
OPT_TOL = 1e-7
_PIVOT_TOL = 1e-10
_DUAL_TOL = 1e-10
EXACT_MAX_VARS = 64


class InfeasibleLP(ValueError):
    pass


@dataclass(frozen=True)
class LpProblem:
    weights: tuple[float, ...]
    rows: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def m(self) -> int:
        return len(self.rows)

    def matrix(self, dtype=float) -> np.ndarray:
        A = np.zeros((self.m, self.n), dtype=dtype)
        for i, row in enumerate(self.rows):
            for j in row:
                A[i, j] = 1
        return A


@dataclass(frozen=True)
class LpSolution:
    x: np.ndarray
    value: float
    iterations: int = 0
    exact: tuple[Fraction, ...] | None = None

    def nonzero(self, tol: float = 0.0) -> list[tuple[int, float]]:
        return [(i, float(v)) for i, v in enumerate(self.x) if v > tol]


def build_lp(inst: Instance) -> LpProblem:
    """One variable per point; one row per object, plus one per segment outside every object."""
    seg_points = inst.index.seg_points
    rows: list[tuple[int, ...]] = []
    labels: list[str] = []
    grouped: set[int] = set()
    if inst.objects:
        for j, obj in enumerate(inst.objects):
            pts: set[int] = set()
            for sid in obj:
                pts.update(seg_points[sid])
                grouped.add(sid)
            rows.append(tuple(sorted(pts)))
            labels.append(f"object {j}")
    for s in inst.segments:
        if s.id in grouped:
            continue
        rows.append(tuple(seg_points[s.id]))
        labels.append(f"segment {s.id}")
    return LpProblem(tuple(p.w for p in inst.points), tuple(rows), tuple(labels))


def _simplex(c: np.ndarray, A: np.ndarray, exact: bool, max_iter: int):
    m, n = A.shape
    total = n + m
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    tol = 0 if exact else _DUAL_TOL
    inf = float("inf")

    eye = np.eye(m, dtype=object if exact else float)
    if exact:
        eye = np.vectorize(Fraction, otypes=[object])(eye) if m else eye
    T = np.hstack([-A, eye])
    d = np.concatenate([c, np.full(m, zero, dtype=T.dtype)])
    upper = np.array([1.0] * n + [inf] * m)
    basis = list(range(n, total))
    is_basic = np.zeros(total, dtype=bool)
    is_basic[n:] = True
    at_upper = np.zeros(total, dtype=bool)
    at_upper[:n] = True
    val = A.sum(axis=1) - one  # surplus values at x = 1
    basis_arr = np.array(basis)

    it = 0
    while True:
        if it >= max_iter:
            raise RuntimeError(f"simplex did not converge in {max_iter} iterations")
        if exact:
            dl = np.array([v < 0 for v in d])
            du = np.array([v > 0 for v in d])
        else:
            dl = d < -tol
            du = d > tol
        eligible = ~is_basic & ((~at_upper & dl) | (at_upper & du))
        cand = np.flatnonzero(eligible)
        if cand.size == 0:
            break
        it += 1
        j = int(cand[0])
        step = 1 if not at_upper[j] else -1
        delta = -step * T[:, j]

        flip = upper[j] if j < n else inf
        if exact:
            best, best_var, best_row = flip, j, -1
            for i in range(m):
                di = delta[i]
                if di < 0:
                    ratio = val[i] / (-di)
                elif di > 0 and basis[i] < n:
                    ratio = (one - val[i]) / di
                else:
                    continue
                if ratio < best or (ratio == best and basis[i] < best_var):
                    best, best_var, best_row = ratio, basis[i], i
        else:
            best, best_row = _ratio_test(delta, val, basis_arr, n, flip, j)
        if best == inf:
            raise RuntimeError("covering LP reported unbounded; this indicates a solver bug")
        theta = best
        val = val + theta * delta
        if best_row < 0:
            at_upper[j] = not at_upper[j]
            continue
        r = best_row
        leaving = basis[r]
        hits_upper = delta[r] > 0
        start = one if at_upper[j] else zero
        entering_value = start + step * theta
        T[r] = T[r] / T[r, j]
        col = T[:, j].copy()
        col[r] = zero
        T -= np.outer(col, T[r])
        d = d - d[j] * T[r]
        is_basic[leaving] = False
        at_upper[leaving] = bool(hits_upper)
        is_basic[j] = True
        at_upper[j] = False
        basis[r] = j
        basis_arr[r] = j
        val[r] = entering_value

    x = np.empty(n, dtype=T.dtype)
    for j in range(n):
        x[j] = one if at_upper[j] else zero
    for i, var in enumerate(basis):
        if var < n:
            x[var] = val[i]
    return x, basis, at_upper, it


def _ratio_test(delta, val, basis_arr, n, flip, entering):
    """Float ratio test; Bland tie-break on the smallest variable index."""
    ratios = np.full(delta.shape, np.inf)
    down = delta < -_PIVOT_TOL
    up = (delta > _PIVOT_TOL) & (basis_arr < n)
    ratios[down] = val[down] / -delta[down]
    ratios[up] = (1.0 - val[up]) / delta[up]
    np.maximum(ratios, 0.0, out=ratios)
    lo = ratios.min() if ratios.size else np.inf
    best = min(lo, flip)
    if best == np.inf:
        return best, -1
    tied = np.flatnonzero(ratios <= best + 1e-12)
    if tied.size == 0:
        return best, -1
    row = int(tied[np.argmin(basis_arr[tied])])
    if flip <= best + 1e-12 and entering < basis_arr[row]:
        return flip, -1
    return float(max(ratios[row], 0.0)), row


def _refine(A: np.ndarray, basis: list[int], at_upper: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Recompute the basic solution from the original matrix to shed tableau drift."""
    m, n = A.shape
    if m == 0:
        return x
    M = np.hstack([A, -np.eye(m)])
    in_basis = set(basis)
    nonbasic = [j for j in range(n + m) if j not in in_basis]
    xn = np.array([1.0 if (j < n and at_upper[j]) else 0.0 for j in nonbasic])
    rhs = np.ones(m) - (M[:, nonbasic] @ xn if nonbasic else 0.0)
    try:
        xb = np.linalg.solve(M[:, basis], rhs)
    except np.linalg.LinAlgError:
        return x
    out = x.astype(float).copy()
    for i, var in enumerate(basis):
        if var < n:
            out[var] = xb[i]
    for k, j in enumerate(nonbasic):
        if j < n:
            out[j] = xn[k]
    return out


def polish(x: np.ndarray, prob: LpProblem) -> np.ndarray:
    """Clip to the box and push every row to at least 1 in floating point.

    Systematic rounding relies on row sums being >= 1; tiny residuals from the
    solver would otherwise let a lattice point slip between two intervals.
    """
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    x[x < 1e-13] = 0.0
    x[x > 1 - 1e-13] = 1.0
    if prob.m == 0:
        return x
    sums = np.array([x[list(r)].sum() for r in prob.rows])
    low = sums.min()
    if low < 1.0:
        if low <= 0:
            raise InfeasibleLP("row with zero mass after solve")
        x = np.minimum(1.0, x * (1.0 / low) * (1 + 1e-12))
    return x


def solve_lp(prob: LpProblem, exact: bool = False, max_iter: int | None = None) -> LpSolution:
    """Optimal vertex of the covering LP.

    ``exact=True`` runs the same pivots over :class:`fractions.Fraction`
    (intended for certification on small problems).
    """
    for i, row in enumerate(prob.rows):
        if not row:
            label = prob.labels[i] if prob.labels else f"row {i}"
            raise InfeasibleLP(f"{label} contains no point")
    if max_iter is None:
        max_iter = 50 * (prob.n + prob.m) + 1000
    if exact:
        if prob.n > EXACT_MAX_VARS:
            raise ValueError(f"exact mode supports at most {EXACT_MAX_VARS} variables")
        c = np.array([Fraction(w) for w in prob.weights], dtype=object)
        A = prob.matrix(dtype=object)
        A = np.vectorize(Fraction, otypes=[object])(A) if A.size else A
        x, _, _, it = _simplex(c, A, exact=True, max_iter=max_iter)
        fx = tuple(Fraction(v) for v in x)
        value = sum((Fraction(w) * v for w, v in zip(prob.weights, fx)), Fraction(0))
        xarr = np.array([float(v) for v in fx])
        return LpSolution(xarr, float(value), it, fx)
    c = np.asarray(prob.weights, dtype=float)
    A = prob.matrix()
    x, basis, at_upper, it = _simplex(c, A, exact=False, max_iter=max_iter)
    x = _refine(A, basis, at_upper, x)
    x = polish(x, prob)
    return LpSolution(x, float(np.dot(c, x)), it)


def solve_instance_lp(inst: Instance, exact: bool = False) -> LpSolution:
    return solve_lp(build_lp(inst), exact=exact)


def residuals(prob: LpProblem, x) -> np.ndarray:
    """Row sums minus one; all entries are >= 0 for a feasible ``x``."""
    x = np.asarray(x, dtype=float)
    return np.array([x[list(r)].sum() - 1.0 for r in prob.rows])


def uniform_solution(inst: Instance, value: float) -> LpSolution:
    """Inject ``x_p = value`` everywhere (used for symmetric known optima)."""
    x = np.full(inst.n, float(value))
    return LpSolution(x, float(np.dot(inst.weights, x)))
