"""Generating-space norms as Minkowski gauges of order intervals.

The norm of the space generated by an interior element u of an ordering cone
C is ||x||_u = inf{lam > 0 : -lam u <=_C x <=_C lam u}, the gauge of the
symmetric order interval [-u, u]. On the coordinate cone this is the weighted
sup-norm max_i |x_i| / u_i, and dividing coordinates by u is an isometry onto
the finite sup-norm space. Infeasible gauges return math.inf; vectors
themselves never carry infinities.
"""
from __future__ import annotations

import math

import numpy as np

from .config import default_tolerances
from .cones import PolyhedralCone, InvalidCone
from .numkernel import LPProblem, as_vector, solve_lp


class GaugeBody:
    """Order interval [-u, u] of a cone with u in the cone's interior."""

    def __init__(self, cone: PolyhedralCone, u):
        self.cone = cone
        self.u = as_vector(u, cone.dim, "generating element")
        if not cone.interior_contains(self.u):
            raise InvalidCone("generating element u must lie in the interior of the cone")
        self.closed_form = cone.kind in ("coordinate", "weighted-coordinate")

    def gauge(self, x, method: str = "auto") -> float:
        """||x||_u; method is "auto", "closed-form" (coordinate cones) or "lp"."""
        x = as_vector(x, self.cone.dim, "point")
        if not np.any(x):
            return 0.0
        if method == "closed-form" or (method == "auto" and self.closed_form):
            if not self.closed_form:
                raise ValueError("closed form available only on coordinate cones")
            return float(np.max(np.abs(x) / self.u))
        return self._gauge_lp(x)

    def _gauge_lp(self, x: np.ndarray) -> float:
        # min lam  s.t.  lam u - x in C  and  lam u + x in C,  lam >= 0.
        H = self.cone.halfspaces
        hu = H @ self.u
        hx = H @ x
        lhs = np.concatenate([hu, hu])[:, None]
        rhs = np.concatenate([hx, -hx])
        rep = solve_lp(LPProblem(cost=np.ones(1), ineq_lhs=lhs, ineq_rhs=rhs,
                                 lower=np.zeros(1)))
        if rep.status != "optimal":
            # Cannot occur for interior u (the interval is absorbing).
            return math.inf
        return float(rep.value)

    def gauge_many(self, X: np.ndarray) -> np.ndarray:
        """Vectorized closed-form gauge for coordinate cones, rows of X."""
        if not self.closed_form:
            raise ValueError("gauge_many requires a coordinate cone")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.max(np.abs(X) / self.u, axis=1)


def order_interval_gauge(body: GaugeBody, x, method: str = "auto") -> float:
    return body.gauge(x, method=method)


def minkowski_gauge(body_vertices, x) -> float:
    """Gauge inf{lam > 0 : x/lam in conv(body_vertices)} via one LP.

    Substituting beta_j = lam * alpha_j turns the bilinear description into
    min sum(beta) s.t. V^T beta = x, beta >= 0; infeasibility means x is not
    absorbed and the gauge is +inf.
    """
    V = np.atleast_2d(np.asarray(body_vertices, dtype=float))
    if V.shape[0] == 0:
        raise ValueError("empty vertex list")
    x = as_vector(x, V.shape[1], "point")
    if not np.any(x):
        return 0.0
    rep = solve_lp(LPProblem(cost=np.ones(V.shape[0]), eq_lhs=V.T, eq_rhs=x,
                             lower=np.zeros(V.shape[0])))
    if rep.status != "optimal":
        return math.inf
    return float(rep.value)


def equivalence_constant(cone: PolyhedralCone, u, v) -> float:
    """Least c >= 1 with c^-1 ||.||_u <= ||.||_v <= c ||.||_u.

    Equals max(||v||_u, ||u||_v, 1); the two gauges are the tight witnesses
    because the sup of ||.||_v over [-u, u] is attained at u itself.
    """
    bu = GaugeBody(cone, u)
    bv = GaugeBody(cone, v)
    return max(bu.gauge(v), bv.gauge(u), 1.0)


def linfty_isometry(u, x) -> np.ndarray:
    """Coordinate-cone isometry x -> (x_i / u_i): sup-norm of the image equals ||x||_u."""
    u = as_vector(u, name="generating element")
    x = as_vector(x, u.shape[0], "point")
    if np.any(u <= 0):
        raise ValueError("invalid generating element: all entries must be positive")
    return x / u


def ambient_norm(x, p: float = 2, weights=None) -> float:
    """p-norm (p in {1, 2, inf}) with optional positive coordinate weights."""
    x = np.asarray(x, dtype=float)
    if weights is not None:
        x = x * np.asarray(weights, dtype=float)
    if p == math.inf or p == "inf":
        return float(np.max(np.abs(x)))
    if p not in (1, 2):
        raise ValueError("ambient norm must have p in {1, 2, inf}")
    return float(np.linalg.norm(x, ord=p))


def ambient_comparison(body: GaugeBody, points, p: float = 2, weights=None) -> dict:
    """Per-instance empirical check of ||.||_u >= ||.|| against the declared
    ambient norm; violations are reported, never asserted."""
    tol = default_tolerances().membership
    violations = []
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    for row in pts:
        gauge_val = body.gauge(row)
        amb = ambient_norm(row, p=p, weights=weights)
        if gauge_val < amb - tol:
            violations.append({"point": row.tolist(), "gauge": gauge_val, "ambient": amb})
    return {"checked": int(pts.shape[0]), "violations": violations}
