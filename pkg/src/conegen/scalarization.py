"""Gerstewitz scalarization phi(y) = inf{t : t e in y + C} for polyhedral C.

phi is the monotone sublinear functional whose sublevel sets are
{y : y in r e - C}; its subdifferential is the polytope
{y* in C* : <y*, e> = 1, <y*, y> = phi(y)}, enumerated exactly in dimension
<= 3 and returned as a membership oracle plus one LP witness above that.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import default_tolerances, resolve_tol
from .cones import InvalidCone, PolyhedralCone
from .numkernel import (LPProblem, as_vector, enumerate_polytope_vertices,
                        polyhedron_is_bounded, solve_lp)


class EmptyDomain(ValueError):
    """Raised when an operation needs a finite phi value but phi = +inf."""


@dataclass
class SubdifferentialResult:
    """Vertex list when exact (dim <= 3 and bounded), otherwise oracle form."""

    witness: np.ndarray
    vertices: np.ndarray | None
    exact: bool
    bounded: bool
    cone: PolyhedralCone
    e: np.ndarray
    y: np.ndarray
    value: float

    def contains(self, z, tol: float | None = None) -> bool:
        tol = resolve_tol(tol)
        z = as_vector(z, self.e.shape[0], "functional")
        if np.min(self.cone.generators @ z) < -tol:
            return False
        if abs(float(z @ self.e) - 1.0) > tol:
            return False
        return abs(float(z @ self.y) - self.value) <= tol


class GerstewitzFn:
    """Pair (C, e) with e in C \\ {0}; the line Re must not lie in C."""

    def __init__(self, cone: PolyhedralCone, e):
        self.cone = cone
        self.e = as_vector(e, cone.dim, "direction e")
        tol = default_tolerances().membership
        if not np.any(self.e):
            raise InvalidCone("direction e must be nonzero")
        if not cone.contains(self.e, tol=tol):
            raise InvalidCone("e must belong to the cone (C + [0,inf) e subset C)")
        if cone.contains(-self.e, tol=tol):
            raise InvalidCone("the line R e lies in the cone")
        self._coordinate = cone.kind in ("coordinate", "weighted-coordinate") \
            and bool(np.all(self.e > 0))

    # -- evaluation -----------------------------------------------------------

    def value(self, y, method: str = "auto") -> float:
        """phi(y) = inf{t : t e - y in C}; +inf when y is outside R(e - C)."""
        y = as_vector(y, self.cone.dim, "point")
        if method == "closed-form" or (method == "auto" and self._coordinate):
            if not self._coordinate:
                raise ValueError("closed form requires a coordinate cone and positive e")
            return float(np.max(y / self.e))
        if method in ("auto", "lp"):
            return self._value_lp(y)
        raise ValueError(f"unknown method {method!r}")

    def _value_lp(self, y: np.ndarray) -> float:
        H = self.cone.halfspaces
        rep = solve_lp(LPProblem(cost=np.ones(1), ineq_lhs=(H @ self.e)[:, None],
                                 ineq_rhs=H @ y))
        if rep.status == "infeasible":
            return math.inf
        if rep.status != "optimal":
            raise RuntimeError(f"phi evaluation LP returned {rep.status}")
        return float(rep.value)

    def _value_ratio(self, y: np.ndarray) -> float:
        # Exact closed form of the 1-D LP; used to build subdifferential
        # constraints without the LP's feasibility slack.
        H = self.cone.halfspaces
        he = H @ self.e
        hy = H @ y
        pos = he > default_tolerances().interior
        if np.any(hy[~pos] > default_tolerances().membership):
            return math.inf
        return float(np.max(hy[pos] / he[pos]))

    def value_many(self, Y: np.ndarray) -> np.ndarray:
        """Vectorized closed-form values over rows of Y (any polyhedral cone
        with e interior; falls back to the ratio formula with halfspaces)."""
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        if self._coordinate:
            return np.max(Y / self.e, axis=1)
        H = self.cone.halfspaces
        he = H @ self.e
        if np.any(he <= 0):
            raise ValueError("vectorized evaluation needs e in the interior")
        return np.max((Y @ H.T) / he, axis=1)

    def sublevel(self, y, r: float, tol: float | None = None) -> bool:
        """phi(y) <= r  iff  y in r e - C."""
        y = as_vector(y, self.cone.dim, "point")
        return self.cone.contains(r * self.e - y, tol=tol)

    # -- subdifferential --------------------------------------------------------

    def _subdiff_system(self, y: np.ndarray):
        value = self._value_ratio(y)
        if not math.isfinite(value):
            raise EmptyDomain("phi is +inf at this point; subdifferential undefined")
        G = self.cone.generators  # halfspace description of the dual cone
        eq = np.vstack([self.e, y])
        rhs = np.array([1.0, value])
        return G, eq, rhs, value

    def subdifferential(self, y) -> SubdifferentialResult:
        y = as_vector(y, self.cone.dim, "point")
        G, eq, rhs, value = self._subdiff_system(y)
        m = self.cone.dim
        witness_rep = solve_lp(LPProblem(cost=np.zeros(m), ineq_lhs=G,
                                         ineq_rhs=np.zeros(G.shape[0]),
                                         eq_lhs=eq, eq_rhs=rhs))
        if witness_rep.status != "optimal":
            raise RuntimeError(
                f"subdifferential witness LP returned {witness_rep.status}; "
                "the Lemma guarantees nonemptiness on dom phi")
        vertices = None
        exact = m <= 3
        bounded = True
        if exact:
            bounded = polyhedron_is_bounded(G, eq)
            if bounded:
                vertices = enumerate_polytope_vertices(G, np.zeros(G.shape[0]), eq, rhs)
            else:
                exact = False
        return SubdifferentialResult(witness=witness_rep.point, vertices=vertices,
                                     exact=exact, bounded=bounded, cone=self.cone,
                                     e=self.e, y=y, value=value)

    def directional_derivative(self, y, d) -> float:
        """phi'(y; d) = max{<y*, d> : y* in subdifferential at y} by LP."""
        y = as_vector(y, self.cone.dim, "point")
        d = as_vector(d, self.cone.dim, "direction")
        G, eq, rhs, _ = self._subdiff_system(y)
        rep = solve_lp(LPProblem(cost=-d, ineq_lhs=G, ineq_rhs=np.zeros(G.shape[0]),
                                 eq_lhs=eq, eq_rhs=rhs))
        if rep.status == "unbounded":
            return math.inf
        if rep.status != "optimal":
            raise RuntimeError(f"directional derivative LP returned {rep.status}")
        return float(-rep.value)
