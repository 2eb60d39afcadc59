"""Centralized tolerances and iteration caps shared by every module."""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_TOL = "CONEGEN_TOL"


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances used across the library.

    membership      slack accepted in cone inequalities <A_k, x> >= -membership
    interior        strict-inequality margin for interior / strict-positivity tests
    strict_nonzero  norm threshold realizing "nonzero" in strict cone comparisons
    lp_feas         feasibility / optimality residual target of the simplex kernel
    lp_pivot        pivot and reduced-cost threshold inside the simplex
    rank_margin     required gap L - L_f before penalty equivalence is attempted
    gradient_map    stopping norm of the projected-gradient mapping
    kkt             KKT residual target of the primal solver
    fd_step         step of finite-difference validation of directional derivatives
    fd_check        tolerance of that validation (absorbs kink proximity)
    gap_assert      duality-gap bound asserted under the modified Slater condition
    weak_duality    slack allowed in the weak-duality inequality
    """

    membership: float = 1e-9
    interior: float = 1e-12
    strict_nonzero: float = 1e-8
    lp_feas: float = 1e-9
    lp_pivot: float = 1e-11
    rank_margin: float = 1e-9
    gradient_map: float = 1e-7
    kkt: float = 1e-6
    fd_step: float = 1e-5
    fd_check: float = 1e-4
    gap_assert: float = 1e-5
    weak_duality: float = 1e-9


@dataclass(frozen=True)
class SolverLimits:
    simplex_iters: int = 20_000
    active_set_iters: int = 2_000
    dual_ascent_iters: int = 50_000
    pg_iters: int = 200_000
    dykstra_sweeps: int = 500


def default_tolerances() -> Tolerances:
    """Default tolerances; CONEGEN_TOL (absolute, numeric) overrides membership."""
    tols = Tolerances()
    env = os.environ.get(ENV_TOL)
    if env is not None:
        tols = replace(tols, membership=float(env))
    return tols


DEFAULT_LIMITS = SolverLimits()


def resolve_tol(tol: float | None) -> float:
    return default_tolerances().membership if tol is None else float(tol)
