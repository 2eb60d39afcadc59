"""Box-constrained convex programs: modified Slater check, Lagrange duality,
and Fermat-rule stationarity certificates.

The primal is min 0.5 x'Qx + q'x + c over the box [x_a, x_b] subject to the
affine map g(x) = Gx + g0 landing in -Y+ and h(x) = Hx + h0 = 0. All
constraints are polyhedral, so the inner Lagrangian minimization is an exact
linear solve and LP instances are handed to the simplex on both sides.

Sign convention: the Lagrangian adds <y*, g(x)> and <z*, h(x)> and subtracts
the box terms <x1*, x - x_a> and <x2*, x_b - x>, all multipliers in their
positive dual cones, so the dual value never exceeds the primal value and a
satisfied Slater flag implies a vanishing gap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_LIMITS, SolverLimits, default_tolerances
from .cones import PolyhedralCone, coordinate_cone
from .numkernel import (FarkasCertificate, LPProblem, as_vector,
                        project_box, projected_gradient, solve_lp)


@dataclass
class BoxProgram:
    """Quadratic objective, affine cone constraint, affine equality, box."""

    n: int
    Q: np.ndarray
    q: np.ndarray
    c: float
    x_lo: np.ndarray
    x_hi: np.ndarray
    G: np.ndarray | None = None           # g(x) = G x + g0 in -Y+
    g0: np.ndarray | None = None
    cone_y: PolyhedralCone | None = None
    H: np.ndarray | None = None           # h(x) = H x + h0 = 0
    h0: np.ndarray | None = None

    def __post_init__(self):
        n = self.n
        self.Q = np.zeros((n, n)) if self.Q is None else np.asarray(self.Q, dtype=float)
        if self.Q.shape != (n, n):
            raise ValueError("Q has wrong shape")
        if np.max(np.abs(self.Q - self.Q.T)) > 1e-10:
            raise ValueError("Q must be symmetric")
        self.Q = 0.5 * (self.Q + self.Q.T)
        if self.Q.any() and np.min(np.linalg.eigvalsh(self.Q)) < -1e-10:
            raise ValueError("Q must be positive semidefinite")
        self.q = as_vector(self.q, n, "q")
        self.c = float(self.c)
        self.x_lo = as_vector(self.x_lo, n, "x_a")
        self.x_hi = as_vector(self.x_hi, n, "x_b")
        if np.min(self.x_hi - self.x_lo) <= default_tolerances().interior:
            raise ValueError("box must have x_b - x_a interior to the coordinate cone")
        if self.G is not None:
            self.G = np.atleast_2d(np.asarray(self.G, dtype=float))
            self.g0 = as_vector(self.g0, self.G.shape[0], "g0")
            if self.cone_y is None or self.cone_y.dim != self.G.shape[0]:
                raise ValueError("constraint cone missing or of wrong dimension")
        if self.H is not None:
            self.H = np.atleast_2d(np.asarray(self.H, dtype=float))
            self.h0 = as_vector(self.h0, self.H.shape[0], "h0")

    @property
    def m(self) -> int:
        return 0 if self.G is None else self.G.shape[0]

    @property
    def k(self) -> int:
        return 0 if self.H is None else self.H.shape[0]

    def objective(self, x) -> float:
        x = as_vector(x, self.n, "x")
        return float(0.5 * x @ self.Q @ x + self.q @ x + self.c)

    def gradient(self, x) -> np.ndarray:
        return self.Q @ x + self.q

    def g(self, x) -> np.ndarray:
        return self.G @ x + self.g0 if self.G is not None else np.zeros(0)

    def h(self, x) -> np.ndarray:
        return self.H @ x + self.h0 if self.H is not None else np.zeros(0)

    def feasible(self, x, tol: float | None = None) -> bool:
        tol = default_tolerances().membership if tol is None else tol
        x = as_vector(x, self.n, "x")
        if np.max(self.x_lo - x) > tol or np.max(x - self.x_hi) > tol:
            return False
        if self.m and not self.cone_y.contains(-self.g(x), tol=tol):
            return False
        return not (self.k and np.max(np.abs(self.h(x))) > tol)

    def _ineq_rows(self):
        """All inequality rows a@x <= b beyond the box: cone rows of g."""
        if self.m == 0:
            return np.zeros((0, self.n)), np.zeros(0)
        A = self.cone_y.halfspaces
        return A @ self.G, -(A @ self.g0)


@dataclass
class Multipliers:
    """(y*, x1*, x2*, z*); y* in the dual cone of Y+, x1*, x2* >= 0, z* free."""

    y: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    z: np.ndarray

    def validate(self, prog: BoxProgram):
        tol = default_tolerances()
        if prog.m and np.min(prog.cone_y.generators @ self.y) < -tol.membership:
            raise ValueError("y* outside the dual constraint cone")
        if np.min(self.x1, initial=0.0) < -tol.interior or \
                np.min(self.x2, initial=0.0) < -tol.interior:
            raise ValueError("box multipliers must be nonnegative")

    def lifted(self, pi: np.ndarray, e_prime: np.ndarray) -> dict:
        """Coordinates of the multipliers in the reweighted generating-space
        frame (x scaled by pi, y by e'); a diagonal change of frame only."""
        return {
            "y": (self.y * e_prime).tolist(),
            "x1": (self.x1 * pi).tolist(),
            "x2": (self.x2 * pi).tolist(),
            "z": self.z.tolist(),
        }


def zero_multipliers(prog: BoxProgram) -> Multipliers:
    return Multipliers(y=np.zeros(prog.m), x1=np.zeros(prog.n),
                       x2=np.zeros(prog.n), z=np.zeros(prog.k))


def lagrangian_value(prog: BoxProgram, x, mult: Multipliers) -> float:
    """f(x) + <y*, g(x)> - <x1*, x - x_a> - <x2*, x_b - x> + <z*, h(x)>."""
    x = as_vector(x, prog.n, "x")
    val = prog.objective(x)
    if prog.m:
        val += float(mult.y @ prog.g(x))
    val -= float(mult.x1 @ (x - prog.x_lo))
    val -= float(mult.x2 @ (prog.x_hi - x))
    if prog.k:
        val += float(mult.z @ prog.h(x))
    return val


def dual_value(prog: BoxProgram, mult: Multipliers) -> float:
    """Exact unconstrained minimum of the Lagrangian over R^n.

    Solves the stationarity system; a residual gradient outside range(Q)
    means linear descent to -inf.
    """
    b = prog.q.copy()
    if prog.m:
        b += prog.G.T @ mult.y
    b += -mult.x1 + mult.x2
    if prog.k:
        b += prog.H.T @ mult.z
    const = prog.c + float(mult.x1 @ prog.x_lo) - float(mult.x2 @ prog.x_hi)
    if prog.m:
        const += float(mult.y @ prog.g0)
    if prog.k:
        const += float(mult.z @ prog.h0)
    if not prog.Q.any():
        if np.max(np.abs(b)) > 1e-11:
            return -math.inf
        return const
    x, *_ = np.linalg.lstsq(prog.Q, -b, rcond=None)
    if np.max(np.abs(prog.Q @ x + b)) > 1e-8:
        return -math.inf
    return float(0.5 * x @ prog.Q @ x + b @ x + const)


# ---------------------------------------------------------------------------
# modified Slater condition

@dataclass
class SlaterReport:
    satisfied: bool
    witness: np.ndarray | None
    lam: float | None
    margin: float
    h_neighborhood: bool | None
    diagnosis: str = ""

    def to_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "witness": None if self.witness is None else self.witness.tolist(),
            "lambda": self.lam,
            "margin": self.margin,
            "h_neighborhood": self.h_neighborhood,
            "diagnosis": self.diagnosis,
        }


def check_modified_slater(prog: BoxProgram, e) -> SlaterReport:
    """Search for feasible x with -lam g(x) - e interior to Y+ for some lam > 0.

    Equivalent to max over the h-feasible box of min_k <A_k, -g(x)> being
    strictly positive. Also reports (qualitatively) whether h(Omega) covers a
    neighborhood of 0: full row rank of H plus an h-solution strictly inside
    the box.
    """
    tols = default_tolerances()
    if prog.m == 0:
        rep = _h_interior(prog)
        if rep is None:
            return SlaterReport(False, None, None, -math.inf, _h_rank_ok(prog),
                                "equality constraints infeasible on the box")
        return SlaterReport(True, rep, 1.0, math.inf, _h_rank_ok(prog),
                            "no cone constraint; Slater reduces to h-feasibility")
    e = as_vector(e, prog.m, "e")
    if not prog.cone_y.interior_contains(e):
        raise ValueError("e must be interior to the constraint cone")
    A = prog.cone_y.halfspaces
    rows_x = -(A @ prog.G)
    off = A @ prog.g0
    # max t  s.t.  rows_x @ x - t >= off  for every cone row, x in box, h = 0
    nv = prog.n + 1
    ineq = np.hstack([rows_x, -np.ones((A.shape[0], 1))])
    eq = None if prog.k == 0 else np.hstack([prog.H, np.zeros((prog.k, 1))])
    eq_rhs = None if prog.k == 0 else -prog.h0
    lower = np.concatenate([prog.x_lo, [-math.inf]])
    upper = np.concatenate([prog.x_hi, [math.inf]])
    rep = solve_lp(LPProblem(cost=-np.eye(nv)[-1], ineq_lhs=ineq, ineq_rhs=off,
                             eq_lhs=eq, eq_rhs=eq_rhs, lower=lower, upper=upper))
    if rep.status == "infeasible":
        return SlaterReport(False, None, None, -math.inf, _h_rank_ok(prog),
                            "equality constraints infeasible on the box")
    if rep.status != "optimal":
        return SlaterReport(False, None, None, -math.inf, _h_rank_ok(prog),
                            f"search LP returned {rep.status}")
    x_bar = rep.point[:prog.n]
    margin = float(rep.point[-1])
    if margin <= tols.membership:
        return SlaterReport(False, None, None, margin, _h_rank_ok(prog),
                            "-g(x) never reaches the interior of the cone")
    ratios = (A @ e) / np.maximum(A @ -prog.g(x_bar), 1e-300)
    lam = max(1.0, 2.0 * float(np.max(ratios)))
    return SlaterReport(True, x_bar, lam, margin, _h_rank_ok(prog))


def _h_interior(prog: BoxProgram):
    if prog.k == 0:
        return 0.5 * (prog.x_lo + prog.x_hi)
    nv = prog.n + 1
    gap = prog.x_hi - prog.x_lo
    ineq = np.vstack([np.hstack([np.eye(prog.n), -gap[:, None] / 2]),
                      np.hstack([-np.eye(prog.n), -gap[:, None] / 2])])
    rhs = np.concatenate([prog.x_lo, -prog.x_hi])
    eq = np.hstack([prog.H, np.zeros((prog.k, 1))])
    rep = solve_lp(LPProblem(cost=-np.eye(nv)[-1], ineq_lhs=ineq, ineq_rhs=rhs,
                             eq_lhs=eq, eq_rhs=-prog.h0,
                             lower=np.concatenate([np.full(prog.n, -math.inf), [0.0]]),
                             upper=np.concatenate([np.full(prog.n, math.inf), [1.0]])))
    if rep.status != "optimal" or rep.point[-1] <= 1e-9:
        return None
    return rep.point[:prog.n]


def _h_rank_ok(prog: BoxProgram) -> bool | None:
    if prog.k == 0:
        return True
    if np.linalg.matrix_rank(prog.H, tol=1e-10) < prog.k:
        return False
    return _h_interior(prog) is not None


# ---------------------------------------------------------------------------
# primal solver

@dataclass
class PrimalResult:
    status: str
    x: np.ndarray | None
    value: float | None
    multipliers: Multipliers | None
    kkt_residual: float | None
    iterations: int
    farkas: FarkasCertificate | None = None


def _constraint_rows(prog: BoxProgram):
    """Inequality rows a@x <= b: box lower, box upper, then cone rows of g."""
    n = prog.n
    rows = [-np.eye(n), np.eye(n)]
    rhs = [-prog.x_lo, prog.x_hi]
    gA, gb = prog._ineq_rows()
    if gA.shape[0]:
        rows.append(gA)
        rhs.append(gb)
    return np.vstack(rows), np.concatenate(rhs)


def _phase1_point(prog: BoxProgram):
    gA, gb = prog._ineq_rows()
    rep = solve_lp(LPProblem(
        cost=np.zeros(prog.n),
        ineq_lhs=None if gA.shape[0] == 0 else -gA,
        ineq_rhs=None if gA.shape[0] == 0 else -gb,
        eq_lhs=prog.H, eq_rhs=None if prog.k == 0 else -prog.h0,
        lower=prog.x_lo, upper=prog.x_hi))
    return rep


def _kkt_residual(prog: BoxProgram, x: np.ndarray, mult: Multipliers) -> float:
    grad = prog.gradient(x)
    if prog.m:
        grad = grad + prog.G.T @ mult.y
    grad = grad - mult.x1 + mult.x2
    if prog.k:
        grad = grad + prog.H.T @ mult.z
    stat = float(np.max(np.abs(grad)))
    comp = max(float(np.max(mult.x1 * np.abs(x - prog.x_lo), initial=0.0)),
               float(np.max(mult.x2 * np.abs(prog.x_hi - x), initial=0.0)))
    if prog.m:
        comp = max(comp, float(np.max(np.abs(mult.y) *
                                      np.abs(prog.cone_y.halfspaces @ prog.g(x)))))
    feas = 0.0
    feas = max(feas, float(np.max(prog.x_lo - x, initial=0.0)),
               float(np.max(x - prog.x_hi, initial=0.0)))
    if prog.m:
        feas = max(feas, float(np.max(prog.cone_y.halfspaces @ prog.g(x), initial=0.0)))
    if prog.k:
        feas = max(feas, float(np.max(np.abs(prog.h(x)), initial=0.0)))
    return max(stat, comp, feas)


def _active_set_qp(prog: BoxProgram, x0: np.ndarray,
                   limits: SolverLimits) -> PrimalResult:
    """Primal active-set method for PSD Q over polyhedral constraints.

    The feasible set is compact (box), so unbounded equality-constrained
    subproblems always hit a blocking constraint. Deterministic: lowest-index
    rules throughout.
    """
    A, b = _constraint_rows(prog)
    E = prog.H if prog.k else np.zeros((0, prog.n))
    x = x0.copy()
    work = set(np.where(A @ x >= b - 1e-9)[0])
    n = prog.n
    for it in range(limits.active_set_iters):
        W = sorted(work)
        Aw = A[W] if W else np.zeros((0, n))
        C = np.vstack([Aw, E])
        grad = prog.gradient(x)
        p, lam, consistent = _eqp_step(prog.Q, grad, C)
        if not consistent:
            d = _descent_ray(prog.Q, grad, C)
            if d is None:
                p = np.zeros(n)
            else:
                alpha, blocker = _ratio_test(A, b, x, d, math.inf)
                if blocker is None:
                    raise RuntimeError("unbounded ray inside a compact box")
                x = x + alpha * d
                work.add(blocker)
                continue
        if np.linalg.norm(p) <= 1e-11:
            lam_ineq = lam[:len(W)]
            neg = [W[i] for i in range(len(W)) if lam_ineq[i] < -1e-9]
            if not neg:
                mult = _multipliers_from_rows(prog, W, lam)
                res = _kkt_residual(prog, x, mult)
                return PrimalResult("optimal", x, prog.objective(x), mult, res, it + 1)
            work.discard(min(neg))
            continue
        alpha, blocker = _ratio_test(A, b, x, p, 1.0)
        x = x + alpha * p
        if blocker is not None:
            work.add(blocker)
    mult = zero_multipliers(prog)
    return PrimalResult("iteration-cap", x, prog.objective(x), mult,
                        _kkt_residual(prog, x, mult), limits.active_set_iters)


def _eqp_step(Q, grad, C):
    """Minimize 0.5 p'Qp + grad'p subject to C p = 0."""
    n = Q.shape[0]
    mC = C.shape[0]
    K = np.zeros((n + mC, n + mC))
    K[:n, :n] = Q
    K[:n, n:] = C.T
    K[n:, :n] = C
    rhs = np.concatenate([-grad, np.zeros(mC)])
    sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
    residual = np.max(np.abs(K @ sol - rhs)) if K.size else 0.0
    return sol[:n], sol[n:], residual <= 1e-8


def _descent_ray(Q, grad, C):
    """Zero-curvature descent direction in the null space of C, if any."""
    n = Q.shape[0]
    if C.shape[0]:
        _, s, vt = np.linalg.svd(C)
        rank = int(np.sum(s > 1e-10))
        Z = vt[rank:].T
    else:
        Z = np.eye(n)
    if Z.shape[1] == 0:
        return None
    Hr = Z.T @ Q @ Z
    gr = Z.T @ grad
    w, V = np.linalg.eigh(Hr)
    for i in range(len(w)):
        if w[i] <= 1e-10 and abs(V[:, i] @ gr) > 1e-10:
            d = Z @ V[:, i]
            return -d if d @ grad > 0 else d
    return None


def _ratio_test(A, b, x, p, alpha_max):
    slack = b - A @ x
    rate = A @ p
    blocker = None
    alpha = alpha_max
    for i in range(A.shape[0]):
        if rate[i] > 1e-12:
            a = max(slack[i], 0.0) / rate[i]
            if a < alpha - 1e-14:
                alpha = a
                blocker = i
    return alpha, blocker


def _multipliers_from_rows(prog: BoxProgram, W, lam) -> Multipliers:
    n = prog.n
    x1 = np.zeros(n)
    x2 = np.zeros(n)
    y = np.zeros(prog.m)
    K = prog.cone_y.halfspaces.shape[0] if prog.m else 0
    for idx, row in enumerate(W):
        val = max(float(lam[idx]), 0.0)
        if row < n:
            x1[row] = val
        elif row < 2 * n:
            x2[row - n] = val
        else:
            y += val * prog.cone_y.halfspaces[row - 2 * n]
    z = np.asarray(lam[len(W):], dtype=float) if prog.k else np.zeros(0)
    return Multipliers(y=y, x1=x1, x2=x2, z=z)


def solve_primal(prog: BoxProgram,
                 limits: SolverLimits = DEFAULT_LIMITS) -> PrimalResult:
    """Minimize over the feasible set; exact on convex quadratics.

    LP instances go to the simplex. Box-only quadratics run projected
    gradient with an active-set polish; instances with g or h rows use the
    active-set method directly, since no closed-form projection onto the
    composite feasible set exists. Infeasibility returns a Farkas
    certificate.
    """
    feas = _phase1_point(prog)
    if feas.status == "infeasible":
        return PrimalResult("infeasible", None, None, None, None,
                            feas.iterations, farkas=feas.farkas)
    if not prog.Q.any():
        gA, gb = prog._ineq_rows()
        rep = solve_lp(LPProblem(
            cost=prog.q,
            ineq_lhs=None if gA.shape[0] == 0 else -gA,
            ineq_rhs=None if gA.shape[0] == 0 else -gb,
            eq_lhs=prog.H, eq_rhs=None if prog.k == 0 else -prog.h0,
            lower=prog.x_lo, upper=prog.x_hi), limits=limits)
        if rep.status != "optimal":
            return PrimalResult(rep.status, rep.point, None, None, None,
                                rep.iterations, farkas=rep.farkas)
        x = rep.point
        result = _active_set_qp(prog, x, limits)
        result.iterations += rep.iterations
        return result
    if prog.m == 0 and prog.k == 0:
        L = float(np.max(np.linalg.eigvalsh(prog.Q)))
        pg = projected_gradient(prog.gradient,
                                lambda v: project_box(v, prog.x_lo, prog.x_hi),
                                feas.point, step=1.0 / max(L, 1e-12),
                                objective=prog.objective, limits=limits)
        result = _active_set_qp(prog, pg.point, limits)
        result.iterations += pg.iterations
        return result
    return _active_set_qp(prog, feas.point, limits)


# ---------------------------------------------------------------------------
# dual solver

@dataclass
class DualResult:
    status: str
    multipliers: Multipliers
    value: float
    iterations: int
    capped: bool = False


def _project_dual_cone(cone: PolyhedralCone, y: np.ndarray,
                       sweeps: int) -> np.ndarray:
    """Projection onto {y : <y, g_j> >= 0}; clamp for the coordinate cone,
    Dykstra over the halfspaces otherwise."""
    if cone.kind in ("coordinate", "weighted-coordinate"):
        return np.maximum(y, 0.0)
    G = cone.generators
    x = y.copy()
    corrections = np.zeros((G.shape[0], y.shape[0]))
    for _ in range(sweeps):
        moved = 0.0
        for j in range(G.shape[0]):
            prev = x + corrections[j]
            viol = float(G[j] @ prev)
            newx = prev - min(viol, 0.0) * G[j]
            corrections[j] = prev - newx
            moved = max(moved, float(np.max(np.abs(newx - x))))
            x = newx
        if moved <= 1e-14:
            break
    return x


def solve_dual(prog: BoxProgram, e=None, mult0: Multipliers | None = None,
               primal_value: float | None = None,
               limits: SolverLimits = DEFAULT_LIMITS) -> DualResult:
    """Maximize the dual function over the multiplier cone.

    LP instances solve the explicit dual LP by simplex. Quadratic instances
    run projected supergradient ascent (Polyak steps when the primal value is
    known, 1/k otherwise) from mult0; a divergence guard returns the best
    iterate when the cap is reached.
    """
    if not prog.Q.any():
        return _dual_lp(prog, limits)
    tols = default_tolerances()
    mult = mult0 if mult0 is not None else zero_multipliers(prog)
    best = mult
    best_val = dual_value(prog, mult)
    if not math.isfinite(best_val):
        best_val = -math.inf
    val = best_val
    for k in range(limits.dual_ascent_iters):
        if primal_value is not None and math.isfinite(best_val) and \
                primal_value - best_val <= 1e-12 * max(1.0, abs(primal_value)):
            return DualResult("optimal", best, best_val, k)
        x_hat = _inner_argmin(prog, mult)
        if x_hat is None:
            mult = _halve_toward(best, mult)
            val = dual_value(prog, mult)
            continue
        sg_y = prog.g(x_hat) if prog.m else np.zeros(0)
        sg_x1 = -(x_hat - prog.x_lo)
        sg_x2 = -(prog.x_hi - x_hat)
        sg_z = prog.h(x_hat) if prog.k else np.zeros(0)
        # Project the supergradient at active bounds so the Polyak step is
        # sized by the movable components only.
        sg_x1[(mult.x1 <= 0.0) & (sg_x1 < 0.0)] = 0.0
        sg_x2[(mult.x2 <= 0.0) & (sg_x2 < 0.0)] = 0.0
        if prog.m and prog.cone_y.kind in ("coordinate", "weighted-coordinate"):
            sg_y[(mult.y <= 0.0) & (sg_y < 0.0)] = 0.0
        norm2 = float(sg_y @ sg_y + sg_x1 @ sg_x1 + sg_x2 @ sg_x2 + sg_z @ sg_z)
        if norm2 <= 1e-24:
            return DualResult("optimal", mult, val, k)
        if primal_value is not None and math.isfinite(val):
            step = max(primal_value - val, 0.0) / norm2 + 1e-16
        else:
            step = 1.0 / (k + 1)
        y_new = mult.y + step * sg_y if prog.m else mult.y
        if prog.m:
            y_new = _project_dual_cone(prog.cone_y, y_new, limits.dykstra_sweeps)
        mult = Multipliers(y=y_new,
                           x1=np.maximum(mult.x1 + step * sg_x1, 0.0),
                           x2=np.maximum(mult.x2 + step * sg_x2, 0.0),
                           z=mult.z + step * sg_z)
        val = dual_value(prog, mult)
        if math.isfinite(val) and val > best_val:
            best_val, best = val, mult
    return DualResult("iteration-cap", best, best_val,
                      limits.dual_ascent_iters, capped=True)


def _halve_toward(best: Multipliers, mult: Multipliers) -> Multipliers:
    return Multipliers(y=0.5 * (best.y + mult.y), x1=0.5 * (best.x1 + mult.x1),
                       x2=0.5 * (best.x2 + mult.x2), z=0.5 * (best.z + mult.z))


def _inner_argmin(prog: BoxProgram, mult: Multipliers):
    b = prog.q.copy()
    if prog.m:
        b += prog.G.T @ mult.y
    b += -mult.x1 + mult.x2
    if prog.k:
        b += prog.H.T @ mult.z
    x, *_ = np.linalg.lstsq(prog.Q, -b, rcond=None)
    if np.max(np.abs(prog.Q @ x + b)) > 1e-8:
        return None
    return x


def _dual_lp(prog: BoxProgram, limits: SolverLimits) -> DualResult:
    """Explicit dual of the LP instance: maximize the affine dual objective
    over multipliers forced to zero the Lagrangian's x-gradient."""
    n, m, k = prog.n, prog.m, prog.k
    nv = m + 2 * n + k
    # variable order: y (m), x1 (n), x2 (n), z (k)
    eq = np.zeros((n, nv))
    if m:
        eq[:, :m] = prog.G.T
    eq[:, m:m + n] = -np.eye(n)
    eq[:, m + n:m + 2 * n] = np.eye(n)
    if k:
        eq[:, m + 2 * n:] = prog.H.T
    cost = np.zeros(nv)
    if m:
        cost[:m] = -prog.g0
    cost[m:m + n] = -prog.x_lo
    cost[m + n:m + 2 * n] = prog.x_hi
    if k:
        cost[m + 2 * n:] = -prog.h0
    ineq = None
    if m:
        ineq = np.zeros((prog.cone_y.generators.shape[0], nv))
        ineq[:, :m] = prog.cone_y.generators
    lower = np.concatenate([np.full(m, -math.inf), np.zeros(2 * n),
                            np.full(k, -math.inf)])
    rep = solve_lp(LPProblem(cost=cost, ineq_lhs=ineq,
                             ineq_rhs=None if ineq is None else np.zeros(ineq.shape[0]),
                             eq_lhs=eq, eq_rhs=-prog.q, lower=lower), limits=limits)
    if rep.status != "optimal":
        return DualResult(rep.status, zero_multipliers(prog), -math.inf,
                          rep.iterations)
    p = rep.point
    mult = Multipliers(y=p[:m], x1=p[m:m + n], x2=p[m + n:m + 2 * n],
                       z=p[m + 2 * n:])
    return DualResult("optimal", mult, -rep.value + prog.c, rep.iterations)


# ---------------------------------------------------------------------------
# gap report

@dataclass
class GapReport:
    primal_status: str
    primal_value: float | None
    dual_value: float | None
    gap: float | None
    slater: SlaterReport
    witness: np.ndarray | None
    multipliers: Multipliers | None
    gap_asserted: bool
    gap_ok: bool
    pi: np.ndarray | None = None
    e_prime: np.ndarray | None = None

    def to_dict(self) -> dict:
        d = {
            "primal_status": self.primal_status,
            "primal_value": self.primal_value,
            "dual_value": self.dual_value,
            "gap": self.gap,
            "slater": self.slater.to_dict(),
            "witness": None if self.witness is None else self.witness.tolist(),
            "gap_asserted": self.gap_asserted,
            "gap_ok": self.gap_ok,
        }
        if self.multipliers is not None:
            d["multipliers"] = {
                "y": self.multipliers.y.tolist(),
                "x1": self.multipliers.x1.tolist(),
                "x2": self.multipliers.x2.tolist(),
                "z": self.multipliers.z.tolist(),
            }
            if self.pi is not None and (self.e_prime is not None or self.multipliers.y.size == 0):
                ep = self.e_prime if self.e_prime is not None else np.zeros(0)
                d["multipliers_lifted"] = self.multipliers.lifted(self.pi, ep)
        return d


def duality_gap_report(prog: BoxProgram, e=None,
                       limits: SolverLimits = DEFAULT_LIMITS) -> GapReport:
    """Primal and dual values with the gap asserted only under modified Slater."""
    tols = default_tolerances()
    if prog.m and e is None:
        e = np.sum(prog.cone_y.generators, axis=0)
        e = e / np.linalg.norm(e)
    slater = check_modified_slater(prog, e) if prog.m else \
        check_modified_slater(prog, None)
    primal = solve_primal(prog, limits)
    if primal.status != "optimal":
        return GapReport(primal.status, None, None, None, slater, None, None,
                         gap_asserted=False, gap_ok=True)
    dual = solve_dual(prog, e, mult0=primal.multipliers,
                      primal_value=primal.value, limits=limits)
    dual.multipliers.validate(prog)
    gap = primal.value - dual.value
    asserted = bool(slater.satisfied)
    ok = (not asserted) or gap <= tols.gap_assert
    pi = prog.x_hi - prog.x_lo  # the generating element of the box lift
    e_prime = None
    if prog.m and slater.satisfied:
        raw = np.asarray(e, dtype=float) - prog.g(slater.witness)
        e_prime = raw / np.linalg.norm(raw)
    return GapReport(primal.status, primal.value, dual.value, gap, slater,
                     primal.x, dual.multipliers, asserted, ok,
                     pi=pi, e_prime=e_prime)


# ---------------------------------------------------------------------------
# stationarity certificates (Fermat rule through the scalarization)

@dataclass
class VectorObjective:
    """Componentwise quadratic map F_i(x) = 0.5 x'Q_i x + q_i'x + c_i."""

    lins: np.ndarray                      # (m, n)
    consts: np.ndarray
    quads: list[np.ndarray] | None = None

    def __post_init__(self):
        self.lins = np.atleast_2d(np.asarray(self.lins, dtype=float))
        self.consts = as_vector(self.consts, self.lins.shape[0], "constants")
        if self.quads is not None and len(self.quads) != self.lins.shape[0]:
            raise ValueError("one quadratic form per component required")

    @property
    def m(self):
        return self.lins.shape[0]

    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = self.lins @ x + self.consts
        if self.quads is not None:
            out = out + 0.5 * np.array([x @ Q @ x for Q in self.quads])
        return out

    def jacobian(self, x) -> np.ndarray:
        J = self.lins.copy()
        if self.quads is not None:
            J = J + np.array([Q @ x for Q in self.quads])
        return J


@dataclass
class StationarityCertificate:
    y_star: np.ndarray
    normal: np.ndarray
    residuals: dict

    def to_dict(self):
        return {"certified": True, "y_star": self.y_star.tolist(),
                "normal": self.normal.tolist(), "residuals": self.residuals}


@dataclass
class CertificateRefusal:
    reason: str
    farkas: FarkasCertificate | None = None
    lp: LPProblem | None = None

    def to_dict(self):
        d = {"certified": False, "reason": self.reason}
        if self.farkas is not None:
            d["farkas"] = {
                "y_ineq": self.farkas.y_ineq.tolist(),
                "y_eq": self.farkas.y_eq.tolist(),
                "y_lower": self.farkas.y_lower.tolist(),
                "y_upper": self.farkas.y_upper.tolist(),
            }
        return d


def stationarity_certificate(objective: VectorObjective, cone_y: PolyhedralCone,
                             e, x_bar, x_lo, x_hi,
                             active_tol: float = 1e-9):
    """Find y* in the dual cone with <y*, e> = 1 and -grad<y*, F>(x_bar) in
    the normal cone of the box at x_bar, or refuse with a Farkas certificate.

    The box normal cone is the sign-pattern cone of the active bounds; a
    point outside the box has empty normal cone and is refused outright.
    """
    m = objective.m
    e = as_vector(e, m, "e")
    x_bar = as_vector(x_bar, objective.lins.shape[1], "x_bar")
    x_lo = as_vector(x_lo, x_bar.shape[0], "x_a")
    x_hi = as_vector(x_hi, x_bar.shape[0], "x_b")
    if np.max(x_lo - x_bar) > active_tol or np.max(x_bar - x_hi) > active_tol:
        return CertificateRefusal("x_bar outside the box: N(x, Omega) is empty")
    J = objective.jacobian(x_bar)          # (m, n)
    lower_active = np.abs(x_bar - x_lo) <= active_tol
    upper_active = np.abs(x_bar - x_hi) <= active_tol
    # Constraints on y*: dual-cone rows, <y*, e> = 1, and componentwise
    # conditions on s = J^T y*: s_i = 0 on inactive coordinates, s_i >= 0 on
    # lower-active ones (normal = -s must be <= 0), s_i <= 0 on upper-active.
    ineq = [cone_y.generators]
    ineq_rhs = [np.zeros(cone_y.generators.shape[0])]
    eq = [e[None, :]]
    eq_rhs = [np.ones(1)]
    for i in range(x_bar.shape[0]):
        col = J[:, i]
        if lower_active[i] and upper_active[i]:
            continue
        if lower_active[i]:
            ineq.append(col[None, :])
            ineq_rhs.append(np.zeros(1))
        elif upper_active[i]:
            ineq.append(-col[None, :])
            ineq_rhs.append(np.zeros(1))
        else:
            eq.append(col[None, :])
            eq_rhs.append(np.zeros(1))
    lp = LPProblem(cost=np.zeros(m), ineq_lhs=np.vstack(ineq),
                   ineq_rhs=np.concatenate(ineq_rhs), eq_lhs=np.vstack(eq),
                   eq_rhs=np.concatenate(eq_rhs))
    rep = solve_lp(lp)
    if rep.status == "infeasible":
        return CertificateRefusal("no multiplier satisfies the Fermat rule",
                                  farkas=rep.farkas, lp=lp)
    if rep.status != "optimal":
        return CertificateRefusal(f"certificate LP returned {rep.status}")
    y_star = rep.point
    normal = -(J.T @ y_star)
    residuals = {
        "dual_cone": float(max(0.0, -np.min(cone_y.generators @ y_star))),
        "normalization": abs(float(y_star @ e) - 1.0),
        "normal_cone": _normal_cone_violation(normal, lower_active, upper_active),
    }
    return StationarityCertificate(y_star=y_star, normal=normal,
                                   residuals=residuals)


def _normal_cone_violation(normal, lower_active, upper_active) -> float:
    v = 0.0
    for i in range(normal.shape[0]):
        if lower_active[i] and upper_active[i]:
            continue
        if lower_active[i]:
            v = max(v, normal[i])          # must be <= 0
        elif upper_active[i]:
            v = max(v, -normal[i])         # must be >= 0
        else:
            v = max(v, abs(normal[i]))     # must vanish
    return float(v)


# ---------------------------------------------------------------------------
# random instances for the verification suites

def random_box_program(rng: np.random.Generator, kind: str = "qp",
                       n_max: int = 6, m_max: int = 4,
                       with_h: bool | None = None):
    """Random Slater-satisfying instance with coordinate constraint cone."""
    n = int(rng.integers(2, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    x_lo = -1.0 - rng.random(n)
    x_hi = 1.0 + rng.random(n)
    center = 0.5 * (x_lo + x_hi)
    if kind == "qp":
        r = int(rng.integers(1, n + 1))
        B = rng.normal(size=(r, n))
        Q = B.T @ B + (0.05 if r == n else 0.0) * np.eye(n)
    else:
        Q = np.zeros((n, n))
    q = rng.normal(size=n)
    G = rng.normal(size=(m, n))
    slack = rng.uniform(0.5, 1.5, size=m)
    g0 = -(G @ center) - slack
    H = h0 = None
    if with_h or (with_h is None and rng.random() < 0.4):
        H = rng.normal(size=(1, n))
        h0 = -(H @ center)
    prog = BoxProgram(n=n, Q=Q, q=q, c=float(rng.normal()), x_lo=x_lo, x_hi=x_hi,
                      G=G, g0=g0, cone_y=coordinate_cone(m), H=H, h0=h0)
    e = np.ones(m) / math.sqrt(m)
    return prog, e


def random_multipliers(rng: np.random.Generator, prog: BoxProgram) -> Multipliers:
    y = np.abs(rng.normal(size=prog.m))
    if prog.m and prog.cone_y.kind == "general":
        y = np.abs(rng.normal(size=prog.cone_y.halfspaces.shape[0])) @ \
            prog.cone_y.halfspaces
    return Multipliers(y=y, x1=np.abs(rng.normal(size=prog.n)),
                       x2=np.abs(rng.normal(size=prog.n)),
                       z=rng.normal(size=prog.k))
