"""Deterministic dense numerical kernels: simplex LP, projections, iterations, grid oracles.

The simplex is a plain two-phase dense tableau with Bland's rule (entering
column = lowest index with negative reduced cost, ratio ties broken by lowest
basic-variable index), so identical inputs produce bitwise-identical reports.
Problem sizes in this artifact stay below ~50 variables; no sparsity, no
warm starts.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT_LIMITS, SolverLimits, Tolerances, default_tolerances


def as_vector(x, dim: int | None = None, name: str = "vector") -> np.ndarray:
    """Validate and return a dense 1-D float array with finite entries."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must have finite entries")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    return arr


@dataclass
class LPProblem:
    """min cost @ x  s.t.  ineq_lhs @ x >= ineq_rhs,  eq_lhs @ x == eq_rhs,
    lower <= x <= upper (entries of the bound arrays may be +-inf)."""

    cost: np.ndarray
    ineq_lhs: np.ndarray | None = None
    ineq_rhs: np.ndarray | None = None
    eq_lhs: np.ndarray | None = None
    eq_rhs: np.ndarray | None = None
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        self.cost = as_vector(self.cost, name="cost")
        n = self.cost.shape[0]
        self.ineq_lhs, self.ineq_rhs = _rows(self.ineq_lhs, self.ineq_rhs, n, "inequality")
        self.eq_lhs, self.eq_rhs = _rows(self.eq_lhs, self.eq_rhs, n, "equality")
        self.lower = _bound(self.lower, n, -math.inf)
        self.upper = _bound(self.upper, n, math.inf)
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def nvars(self) -> int:
        return self.cost.shape[0]


def _rows(lhs, rhs, n, what):
    if lhs is None:
        return np.zeros((0, n)), np.zeros(0)
    lhs = np.atleast_2d(np.asarray(lhs, dtype=float))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
    if lhs.shape != (rhs.shape[0], n):
        raise ValueError(f"{what} rows are dimension-inconsistent")
    if not (np.all(np.isfinite(lhs)) and np.all(np.isfinite(rhs))):
        raise ValueError(f"{what} rows must be finite")
    return lhs, rhs


def _bound(b, n, fill):
    if b is None:
        return np.full(n, fill)
    b = np.asarray(b, dtype=float)
    if b.shape != (n,):
        raise ValueError("bound vector has wrong dimension")
    return b.copy()


@dataclass
class FarkasCertificate:
    """Nonnegative row combination proving infeasibility.

    With y_ineq >= 0 on rows a@x >= b, y_eq free, y_lower >= 0 on x_j >= l_j,
    y_upper >= 0 on -x_j >= -u_j, the combination of all left-hand sides
    vanishes while the same combination of right-hand sides is positive.
    """

    y_ineq: np.ndarray
    y_eq: np.ndarray
    y_lower: np.ndarray
    y_upper: np.ndarray


@dataclass
class SolveReport:
    status: str  # optimal | infeasible | unbounded | iteration-cap
    point: np.ndarray | None = None
    value: float | None = None
    residuals: dict = field(default_factory=dict)
    iterations: int = 0
    farkas: FarkasCertificate | None = None
    duals: np.ndarray | None = None  # row duals: [ineq..., eq...] in input order


def verify_farkas(problem: LPProblem, cert: FarkasCertificate, tol: float = 1e-7) -> bool:
    """Independent sign check of an infeasibility certificate."""
    if np.any(cert.y_ineq < -tol) or np.any(cert.y_lower < -tol) or np.any(cert.y_upper < -tol):
        return False
    n = problem.nvars
    combo = cert.y_ineq @ problem.ineq_lhs if cert.y_ineq.size else np.zeros(n)
    if cert.y_eq.size:
        combo = combo + cert.y_eq @ problem.eq_lhs
    combo = combo + cert.y_lower - cert.y_upper
    rhs = float(cert.y_ineq @ problem.ineq_rhs) if cert.y_ineq.size else 0.0
    if cert.y_eq.size:
        rhs += float(cert.y_eq @ problem.eq_rhs)
    finite_lo = np.isfinite(problem.lower)
    finite_hi = np.isfinite(problem.upper)
    rhs += float(cert.y_lower[finite_lo] @ problem.lower[finite_lo])
    rhs -= float(cert.y_upper[finite_hi] @ problem.upper[finite_hi])
    return bool(np.max(np.abs(combo)) <= tol and rhs > tol)


def solve_lp(problem: LPProblem, tols: Tolerances | None = None,
             limits: SolverLimits = DEFAULT_LIMITS) -> SolveReport:
    tols = tols or default_tolerances()
    n = problem.nvars

    # Unified row system over free x: bounds become explicit inequality rows so
    # that Farkas multipliers map back one-to-one.
    rows = [problem.ineq_lhs]
    rhs = [problem.ineq_rhs]
    lo_idx = np.where(np.isfinite(problem.lower))[0]
    hi_idx = np.where(np.isfinite(problem.upper))[0]
    lo_rows = np.zeros((lo_idx.size, n))
    lo_rows[np.arange(lo_idx.size), lo_idx] = 1.0
    hi_rows = np.zeros((hi_idx.size, n))
    hi_rows[np.arange(hi_idx.size), hi_idx] = -1.0
    rows += [lo_rows, hi_rows]
    rhs += [problem.lower[lo_idx], -problem.upper[hi_idx]]
    A_in = np.vstack(rows)
    b_in = np.concatenate(rhs)
    n_in = A_in.shape[0]
    A_eq, b_eq = problem.eq_lhs, problem.eq_rhs
    n_eq = A_eq.shape[0]

    # Canonical form: x = xp - xm with xp, xm >= 0; slacks on inequality rows.
    m = n_in + n_eq
    ncols = 2 * n + n_in
    A = np.zeros((m, ncols))
    A[:n_in, :n] = A_in
    A[:n_in, n:2 * n] = -A_in
    A[:n_in, 2 * n:] = -np.eye(n_in)
    if n_eq:
        A[n_in:, :n] = A_eq
        A[n_in:, n:2 * n] = -A_eq
    b = np.concatenate([b_in, b_eq])
    flips = np.where(b < 0, -1.0, 1.0)
    A *= flips[:, None]
    b = b * flips
    c = np.concatenate([problem.cost, -problem.cost, np.zeros(n_in)])

    report = _two_phase(A, b, c, tols, limits)
    report_out = SolveReport(status=report["status"], iterations=report["iterations"])
    if report["status"] == "infeasible":
        y = flips * report["farkas_y"]
        report_out.farkas = FarkasCertificate(
            y_ineq=np.maximum(y[:problem.ineq_lhs.shape[0]], 0.0),
            y_eq=y[n_in:],
            y_lower=_scatter(np.maximum(y[problem.ineq_lhs.shape[0]:problem.ineq_lhs.shape[0] + lo_idx.size], 0.0), lo_idx, n),
            y_upper=_scatter(np.maximum(y[problem.ineq_lhs.shape[0] + lo_idx.size:n_in], 0.0), hi_idx, n),
        )
        return report_out
    if report["status"] in ("unbounded", "iteration-cap"):
        return report_out

    s = report["x"]
    x = s[:n] - s[n:2 * n]
    report_out.point = x
    report_out.value = float(problem.cost @ x)
    ineq_resid = 0.0
    if problem.ineq_lhs.shape[0]:
        ineq_resid = float(np.max(np.maximum(problem.ineq_rhs - problem.ineq_lhs @ x, 0.0)))
    eq_resid = float(np.max(np.abs(A_eq @ x - b_eq))) if n_eq else 0.0
    bound_resid = max(
        float(np.max(np.maximum(problem.lower - x, 0.0), initial=0.0)),
        float(np.max(np.maximum(x - problem.upper, 0.0), initial=0.0)),
    )
    report_out.residuals = {
        "ineq": ineq_resid,
        "eq": eq_resid,
        "bounds": bound_resid,
        "optimality": report["opt_resid"],
    }
    y = flips * report["duals"]
    duals = np.concatenate([y[:problem.ineq_lhs.shape[0]], y[n_in:]])
    report_out.duals = duals
    return report_out


def _scatter(vals, idx, n):
    out = np.zeros(n)
    out[idx] = vals
    return out


def _two_phase(A, b, c, tols, limits):
    m, ncols = A.shape
    if m == 0:
        # No rows at all: optimum at x = 0 unless some cost entry is negative.
        if np.any(c < -tols.lp_pivot):
            return {"status": "unbounded", "iterations": 0}
        return {"status": "optimal", "x": np.zeros(ncols), "iterations": 0,
                "duals": np.zeros(0), "opt_resid": 0.0}

    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = np.arange(ncols, ncols + m)
    art = np.arange(ncols, ncols + m)
    # Phase 1: minimize the sum of artificials (c_B = 1 on every row).
    cost1 = np.zeros(T.shape[1])
    cost1[art] = 1.0
    r = cost1 - T.sum(axis=0)
    iters = 0
    status, iters = _simplex_loop(T, r, basis, tols, limits.simplex_iters,
                                  allowed=ncols + m, iters=iters)
    if status == "iteration-cap":
        return {"status": status, "iterations": iters}
    phase1_val = -r[-1]
    if phase1_val > 1e3 * tols.lp_feas:
        # Infeasible: duals from artificial reduced costs (cost 1 each).
        y = 1.0 - r[art]
        return {"status": "infeasible", "iterations": iters, "farkas_y": y}

    # Drive remaining artificials out of the basis; drop redundant rows.
    keep = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] >= ncols:
            row = T[i, :ncols]
            piv_candidates = np.where(np.abs(row) > tols.lp_pivot)[0]
            if piv_candidates.size:
                _pivot(T, None, basis, i, int(piv_candidates[0]))
            else:
                keep[i] = False
    if not np.all(keep):
        T = T[keep]
        basis = basis[keep]

    # Phase 2 on real columns only.
    cost2 = np.zeros(T.shape[1])
    cost2[:ncols] = c
    r = cost2 - cost2[basis] @ T
    status, iters = _simplex_loop(T, r, basis, tols, limits.simplex_iters,
                                  allowed=ncols, iters=iters)
    if status != "optimal":
        return {"status": status, "iterations": iters}
    x = np.zeros(ncols)
    in_real = basis < ncols
    x[basis[in_real]] = T[in_real, -1]
    # Row duals y = c_B B^-1, read off the artificial columns of surviving
    # rows (they hold B^-1); dropped redundant rows get dual zero.
    surv = np.where(keep)[0]
    y = np.zeros(keep.shape[0])
    y[surv] = cost2[basis] @ T[:, ncols + surv]
    opt_resid = float(max(0.0, -np.min(r[:ncols], initial=0.0)))
    return {"status": "optimal", "x": x, "iterations": iters, "duals": y,
            "opt_resid": opt_resid}


def _simplex_loop(T, r, basis, tols, max_iters, allowed, iters):
    while True:
        if iters >= max_iters:
            return "iteration-cap", iters
        neg = np.where(r[:allowed] < -tols.lp_pivot)[0]
        if neg.size == 0:
            return "optimal", iters
        col = int(neg[0])  # Bland: lowest index
        colvals = T[:, col]
        pos = np.where(colvals > tols.lp_pivot)[0]
        if pos.size == 0:
            return "unbounded", iters
        ratios = T[pos, -1] / colvals[pos]
        best = np.min(ratios)
        ties = pos[ratios <= best + 1e-12]
        row = int(ties[np.argmin(basis[ties])])  # lowest basic index on ties
        _pivot(T, r, basis, row, col)
        iters += 1


def _pivot(T, r, basis, row, col):
    T[row] = T[row] / T[row, col]
    piv = T[row]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    T -= np.outer(colvals, piv)
    if r is not None:
        r -= r[col] * piv
    basis[row] = col


# ---------------------------------------------------------------------------
# projections and first-order iterations

def project_box(x, lower, upper) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if np.any(lower > upper):
        raise ValueError("invalid box: lower exceeds upper")
    return np.clip(x, lower, upper)


def projected_gradient(grad: Callable[[np.ndarray], np.ndarray],
                       project: Callable[[np.ndarray], np.ndarray],
                       x0,
                       step: float | Callable[[int], float],
                       objective: Callable[[np.ndarray], float] | None = None,
                       tols: Tolerances | None = None,
                       limits: SolverLimits = DEFAULT_LIMITS) -> SolveReport:
    """Projected gradient descent; stops at gradient-mapping norm <= tols.gradient_map."""
    tols = tols or default_tolerances()
    x = project(np.asarray(x0, dtype=float))
    best_x = x
    best_val = objective(x) if objective is not None else None
    step_at = step if callable(step) else (lambda _k: step)
    for k in range(limits.pg_iters):
        s = step_at(k)
        x_new = project(x - s * grad(x))
        gm = float(np.linalg.norm(x - x_new) / s)
        if objective is not None:
            val = objective(x_new)
            if val <= best_val:
                best_val, best_x = val, x_new
        else:
            best_x = x_new
        if gm <= tols.gradient_map:
            return SolveReport(status="optimal", point=best_x, value=best_val,
                               residuals={"gradient_map": gm}, iterations=k + 1)
        x = x_new
    gm = float(np.linalg.norm(x - project(x - step_at(limits.pg_iters) * grad(x))))
    return SolveReport(status="iteration-cap", point=best_x, value=best_val,
                       residuals={"gradient_map": gm}, iterations=limits.pg_iters)


# ---------------------------------------------------------------------------
# small-dimension polyhedron utilities

def enumerate_polytope_vertices(ineq_lhs, ineq_rhs, eq_lhs=None, eq_rhs=None,
                                tol: float = 1e-9) -> np.ndarray:
    """Vertices of {x : ineq_lhs @ x >= ineq_rhs, eq_lhs @ x == eq_rhs}, dim <= 3.

    Exhaustive basis enumeration; intended for the tiny systems produced by
    subdifferential and facet computations.
    """
    A = np.atleast_2d(np.asarray(ineq_lhs, dtype=float))
    b = np.atleast_1d(np.asarray(ineq_rhs, dtype=float))
    dim = A.shape[1]
    if dim > 3:
        raise ValueError("vertex enumeration supported only in dimension <= 3")
    if eq_lhs is None:
        E = np.zeros((0, dim))
        f = np.zeros(0)
    else:
        E = np.atleast_2d(np.asarray(eq_lhs, dtype=float))
        f = np.atleast_1d(np.asarray(eq_rhs, dtype=float))
    rank_eq = np.linalg.matrix_rank(E, tol=1e-10) if E.size else 0
    need = dim - rank_eq
    verts = []
    for combo in itertools.combinations(range(A.shape[0]), need):
        M = np.vstack([E, A[list(combo)]]) if combo else E
        rhs = np.concatenate([f, b[list(combo)]]) if combo else f
        if M.shape[0] == 0:
            continue
        if np.linalg.matrix_rank(M, tol=1e-10) < dim:
            continue
        x, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        if np.max(np.abs(M @ x - rhs)) > 1e-8:
            continue
        if A.shape[0] and np.min(A @ x - b) < -max(tol, 1e-8):
            continue
        verts.append(x)
    if not verts:
        return np.zeros((0, dim))
    V = np.array(verts)
    return _dedupe_rows(V)


def polyhedron_is_bounded(ineq_lhs, eq_lhs=None, tols: Tolerances | None = None) -> bool:
    """True iff the recession cone {A d >= 0, E d = 0} is {0}."""
    tols = tols or default_tolerances()
    A = np.atleast_2d(np.asarray(ineq_lhs, dtype=float))
    dim = A.shape[1]
    E = None if eq_lhs is None else np.atleast_2d(np.asarray(eq_lhs, dtype=float))
    for j in range(dim):
        for sign in (1.0, -1.0):
            cost = np.zeros(dim)
            cost[j] = -sign  # maximize sign * d_j
            rep = solve_lp(LPProblem(
                cost=cost, ineq_lhs=A, ineq_rhs=np.zeros(A.shape[0]),
                eq_lhs=E, eq_rhs=None if E is None else np.zeros(E.shape[0]),
                lower=-np.ones(dim), upper=np.ones(dim)), tols)
            if rep.status == "optimal" and -rep.value > 0.5:
                return False
    return True


def _dedupe_rows(V: np.ndarray, decimals: int = 9) -> np.ndarray:
    seen = {}
    for row in V:
        key = tuple(np.round(row, decimals) + 0.0)
        if key not in seen:
            seen[key] = row
    return np.array(list(seen.values()))


# ---------------------------------------------------------------------------
# brute-force grid oracle (reference dominance loop, kept deliberately plain
# and independent of the penalty module)

def brute_force_grid_min(evaluate: Callable[[np.ndarray], np.ndarray],
                         grid: Sequence | np.ndarray,
                         cone,
                         tol: float | None = None,
                         strict_tol: float | None = None):
    """Exhaustive cone-minimal subset of evaluate over a finite grid.

    grid is either an (N, d) array of points or a sequence of 1-D axes whose
    cartesian product forms the grid. Returns (indices, points, values).
    """
    tols = default_tolerances()
    tol = tols.membership if tol is None else tol
    strict_tol = tols.strict_nonzero if strict_tol is None else strict_tol
    pts = np.asarray(grid, dtype=float) if not isinstance(grid, (list, tuple)) else None
    if pts is None or pts.ndim != 2:
        axes = [np.asarray(a, dtype=float) for a in grid]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
    if pts.shape[0] == 0:
        raise ValueError("empty grid")
    values = [np.atleast_1d(np.asarray(evaluate(p), dtype=float)) for p in pts]
    minimal = []
    for i in range(len(values)):
        dominated = False
        for j in range(len(values)):
            if i == j:
                continue
            diff = values[j] - values[i]  # want: diff in -C \ {0}
            if float(np.linalg.norm(diff)) <= strict_tol:
                continue
            if cone.contains(-diff, tol=tol):
                dominated = True
                break
        if not dominated:
            minimal.append(i)
    idx = np.array(minimal, dtype=int)
    return idx, pts[idx], np.array([values[i] for i in idx])
