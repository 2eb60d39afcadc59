import math

import numpy as np
import pytest

from conegen.cones import PolyhedralCone, coordinate_cone
from conegen.duality import (BoxProgram, CertificateRefusal, Multipliers,
                             StationarityCertificate, VectorObjective,
                             check_modified_slater, dual_value,
                             duality_gap_report, lagrangian_value,
                             random_box_program, random_multipliers,
                             solve_dual, solve_primal,
                             stationarity_certificate, zero_multipliers)
from conegen.numkernel import verify_farkas


def lp_example():
    # min x1 + x2 on [0,1]^2 with 1 - x1 - x2 <= 0
    return BoxProgram(n=2, Q=None, q=[1.0, 1.0], c=0.0, x_lo=[0.0, 0.0],
                      x_hi=[1.0, 1.0], G=[[-1.0, -1.0]], g0=[1.0],
                      cone_y=coordinate_cone(1))


class TestBoxProgram:
    def test_psd_check(self):
        with pytest.raises(ValueError):
            BoxProgram(n=2, Q=[[-1.0, 0.0], [0.0, 1.0]], q=[0.0, 0.0], c=0.0,
                       x_lo=[0.0, 0.0], x_hi=[1.0, 1.0])

    def test_box_gap_check(self):
        with pytest.raises(ValueError):
            BoxProgram(n=1, Q=None, q=[0.0], c=0.0, x_lo=[1.0], x_hi=[1.0])


class TestLagrangian:
    def test_zero_multipliers(self):
        prog = lp_example()
        x = np.array([0.5, 0.25])
        assert lagrangian_value(prog, x, zero_multipliers(prog)) == \
            pytest.approx(prog.objective(x))

    def test_example_value(self):
        prog = BoxProgram(n=1, Q=None, q=[1.0], c=0.0, x_lo=[0.0], x_hi=[2.0],
                          G=[[1.0]], g0=[-1.0], cone_y=coordinate_cone(1))
        mult = Multipliers(y=np.array([1.0]), x1=np.zeros(1), x2=np.zeros(1),
                           z=np.zeros(0))
        assert lagrangian_value(prog, [0.0], mult) == pytest.approx(-1.0)

    def test_slack_complementary(self):
        prog = lp_example()
        x = np.array([0.7, 0.6])  # feasible, g slack
        mult = Multipliers(y=np.zeros(1), x1=np.zeros(2), x2=np.zeros(2),
                           z=np.zeros(0))
        assert lagrangian_value(prog, x, mult) == pytest.approx(prog.objective(x))


class TestDualValue:
    def test_pure_quadratic(self):
        prog = BoxProgram(n=3, Q=np.eye(3), q=np.zeros(3), c=0.0,
                          x_lo=-np.ones(3), x_hi=np.ones(3))
        assert dual_value(prog, zero_multipliers(prog)) == 0.0

    def test_linear_residual_unbounded(self):
        prog = BoxProgram(n=1, Q=None, q=[1.0], c=0.0, x_lo=[0.0], x_hi=[1.0])
        assert dual_value(prog, zero_multipliers(prog)) == -math.inf

    def test_complete_the_square(self):
        prog = BoxProgram(n=1, Q=[[1.0]], q=[0.0], c=0.0, x_lo=[-9.0], x_hi=[9.0],
                          G=[[1.0]], g0=[-1.0], cone_y=coordinate_cone(1))
        mult = Multipliers(y=np.array([1.0]), x1=np.zeros(1), x2=np.zeros(1),
                           z=np.zeros(0))
        assert dual_value(prog, mult) == pytest.approx(-1.5)


class TestSlater:
    def test_scalar_true(self):
        prog = BoxProgram(n=1, Q=None, q=[0.0], c=0.0, x_lo=[0.0], x_hi=[1.0],
                          G=[[1.0]], g0=[-2.0], cone_y=coordinate_cone(1))
        rep = check_modified_slater(prog, [1.0])
        assert rep.satisfied
        assert np.allclose(rep.witness, [0.0])
        assert rep.lam == pytest.approx(1.0)

    def test_scalar_false(self):
        prog = BoxProgram(n=1, Q=None, q=[0.0], c=0.0, x_lo=[0.0], x_hi=[1.0],
                          G=[[1.0]], g0=[0.0], cone_y=coordinate_cone(1))
        assert not check_modified_slater(prog, [1.0]).satisfied

    def test_h_neighborhood(self):
        prog = BoxProgram(n=2, Q=None, q=[0.0, 0.0], c=0.0, x_lo=[0.0, 0.0],
                          x_hi=[1.0, 1.0], H=[[1.0, -1.0]], h0=[0.0])
        rep = check_modified_slater(prog, None)
        assert rep.h_neighborhood

    def test_h_infeasible_diagnosis(self):
        prog = BoxProgram(n=1, Q=None, q=[0.0], c=0.0, x_lo=[0.0], x_hi=[1.0],
                          G=[[1.0]], g0=[-2.0], cone_y=coordinate_cone(1),
                          H=[[1.0]], h0=[5.0])
        rep = check_modified_slater(prog, [1.0])
        assert not rep.satisfied and "infeasible" in rep.diagnosis


class TestPrimal:
    def test_clamp(self):
        prog = BoxProgram(n=1, Q=[[1.0]], q=[0.0], c=0.0, x_lo=[1.0], x_hi=[2.0])
        rep = solve_primal(prog)
        assert rep.status == "optimal"
        assert np.allclose(rep.x, [1.0]) and rep.value == pytest.approx(0.5)
        assert rep.kkt_residual <= 1e-6

    def test_lp_oracle(self):
        rep = solve_primal(lp_example())
        assert rep.status == "optimal" and rep.value == pytest.approx(1.0, abs=1e-9)

    def test_infeasibility_certificate(self):
        prog = BoxProgram(n=1, Q=None, q=[0.0], c=0.0, x_lo=[0.0], x_hi=[1.0],
                          G=[[1.0]], g0=[1.0], cone_y=coordinate_cone(1))
        rep = solve_primal(prog)
        assert rep.status == "infeasible" and rep.farkas is not None

    def test_kkt_on_random_qps(self):
        rng = np.random.default_rng(26)
        for _ in range(25):
            prog, _ = random_box_program(rng, kind="qp")
            rep = solve_primal(prog)
            assert rep.status == "optimal"
            assert rep.kkt_residual <= 1e-6


class TestDualSolve:
    def test_unconstrained_quadratic(self):
        prog = BoxProgram(n=2, Q=np.eye(2), q=[0.0, 0.0], c=0.0,
                          x_lo=[-1.0, -1.0], x_hi=[1.0, 1.0])
        primal = solve_primal(prog)
        dual = solve_dual(prog, mult0=primal.multipliers,
                          primal_value=primal.value)
        assert dual.value == pytest.approx(primal.value, abs=1e-9)

    def test_lp_duality(self):
        dual = solve_dual(lp_example())
        assert dual.status == "optimal"
        assert dual.value == pytest.approx(1.0, abs=1e-9)
        assert dual.multipliers.y[0] == pytest.approx(1.0, abs=1e-9)

    def test_ascent_without_seed(self):
        prog = BoxProgram(n=2, Q=2 * np.eye(2), q=[1.0, -1.0], c=0.0,
                          x_lo=[0.0, 0.0], x_hi=[1.0, 1.0])
        primal = solve_primal(prog)
        dual = solve_dual(prog, primal_value=primal.value)
        assert primal.value - dual.value <= 1e-5
        assert dual.value <= primal.value + 1e-9

    def test_slater_violating_weak_duality(self):
        prog = BoxProgram(n=1, Q=[[1.0]], q=[0.0], c=0.0, x_lo=[0.0], x_hi=[1.0],
                          G=[[1.0]], g0=[0.0], cone_y=coordinate_cone(1))
        rep = duality_gap_report(prog, [1.0])
        assert not rep.slater.satisfied
        assert rep.dual_value <= rep.primal_value + 1e-9
        assert not rep.gap_asserted


class TestGapReport:
    def test_qp_gap(self):
        prog = BoxProgram(n=1, Q=[[1.0]], q=[1.0], c=0.0, x_lo=[0.0], x_hi=[2.0],
                          G=[[1.0]], g0=[-1.0], cone_y=coordinate_cone(1))
        rep = duality_gap_report(prog, [1.0])
        # hand KKT: x* = 0, value 0, lower bound active with multiplier 1
        assert rep.primal_value == pytest.approx(0.0, abs=1e-9)
        assert rep.gap <= 1e-5 and rep.slater.satisfied and rep.gap_ok

    def test_lp_gap_tight(self):
        rep = duality_gap_report(lp_example(), [1.0])
        assert abs(rep.gap) <= 1e-7

    def test_weak_duality_on_samples(self):
        rng = np.random.default_rng(27)
        for _ in range(15):
            prog, e = random_box_program(rng)
            primal = solve_primal(prog)
            for _ in range(10):
                mult = random_multipliers(rng, prog)
                dv = dual_value(prog, mult)
                if math.isfinite(dv):
                    assert dv <= primal.value + 1e-9

    def test_general_cone_constraint(self):
        cone = PolyhedralCone(2, generators=[[1.0, 0.2], [0.2, 1.0]])
        prog = BoxProgram(n=2, Q=np.eye(2), q=[0.5, -0.3], c=0.0,
                          x_lo=[-1.0, -1.0], x_hi=[1.0, 1.0],
                          G=[[1.0, 0.0], [0.0, 1.0]], g0=[-0.4, -0.4],
                          cone_y=cone)
        e = np.array([1.0, 1.0])
        rep = duality_gap_report(prog, e)
        assert rep.slater.satisfied
        assert rep.gap <= 1e-5


class TestCertificates:
    def test_scalar_left_bound(self):
        obj = VectorObjective(lins=[[0.0]], consts=[0.0], quads=[np.array([[2.0]])])
        cert = stationarity_certificate(obj, coordinate_cone(1), [1.0],
                                        [1.0], [1.0], [2.0])
        assert isinstance(cert, StationarityCertificate)
        assert cert.y_star[0] == pytest.approx(1.0)
        assert cert.normal[0] == pytest.approx(-2.0)
        assert max(cert.residuals.values()) <= 1e-8

    def test_interior_nonzero_gradient_refused(self):
        obj = VectorObjective(lins=[[1.0]], consts=[0.0])
        ref = stationarity_certificate(obj, coordinate_cone(1), [1.0],
                                       [1.5], [1.0], [2.0])
        assert isinstance(ref, CertificateRefusal)
        assert ref.farkas is not None
        assert verify_farkas(ref.lp, ref.farkas)

    def test_opposing_gradients_balanced(self):
        obj = VectorObjective(lins=[[1.0], [-1.0]], consts=[0.0, 0.0])
        cert = stationarity_certificate(obj, coordinate_cone(2), [1.0, 1.0],
                                        [1.5], [1.0], [2.0])
        assert isinstance(cert, StationarityCertificate)
        assert np.allclose(cert.y_star, [0.5, 0.5])

    def test_outside_box_refused(self):
        obj = VectorObjective(lins=[[1.0]], consts=[0.0])
        ref = stationarity_certificate(obj, coordinate_cone(1), [1.0],
                                       [5.0], [1.0], [2.0])
        assert isinstance(ref, CertificateRefusal)
        assert "outside" in ref.reason

    def test_solve_primal_output_certifies(self):
        rng = np.random.default_rng(28)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            B = rng.normal(size=(n, n))
            prog = BoxProgram(n=n, Q=B.T @ B + 0.1 * np.eye(n),
                              q=rng.normal(size=n), c=0.0,
                              x_lo=-np.ones(n), x_hi=np.ones(n))
            rep = solve_primal(prog)
            obj = VectorObjective(lins=prog.q[None, :], consts=[prog.c],
                                  quads=[prog.Q])
            cert = stationarity_certificate(obj, coordinate_cone(1), [1.0],
                                            rep.x, prog.x_lo, prog.x_hi,
                                            active_tol=1e-7)
            assert isinstance(cert, StationarityCertificate)
            assert max(cert.residuals.values()) <= 1e-8


class TestMultiplierValidation:
    def test_valid(self):
        prog = lp_example()
        Multipliers(y=np.array([2.0]), x1=np.zeros(2), x2=np.zeros(2),
                    z=np.zeros(0)).validate(prog)

    def test_outside_dual_cone(self):
        prog = lp_example()
        with pytest.raises(ValueError):
            Multipliers(y=np.array([-1.0]), x1=np.zeros(2), x2=np.zeros(2),
                        z=np.zeros(0)).validate(prog)

    def test_negative_box_multiplier(self):
        prog = lp_example()
        with pytest.raises(ValueError):
            Multipliers(y=np.zeros(1), x1=np.array([-1e-6, 0.0]),
                        x2=np.zeros(2), z=np.zeros(0)).validate(prog)
