import numpy as np
import pytest

from conegen.cones import (InvalidCone, PolyhedralCone,
                           UnsupportedRepresentation, coordinate_cone,
                           weighted_coordinate_cone)


def wedge():
    return PolyhedralCone(2, generators=[[1.0, 0.0], [1.0, 1.0]])


class TestContains:
    def test_orthant(self):
        c = coordinate_cone(2)
        assert c.contains([1.0, 2.0], tol=0.0)
        assert not c.contains([1.0, -1.0], tol=0.0)

    def test_wedge_nonneg_combination(self):
        # (2,1) = 1*(1,0) + 1*(1,1), both coefficients nonnegative
        assert wedge().contains([2.0, 1.0], tol=0.0)
        assert not wedge().contains([-1.0, 0.5])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            coordinate_cone(2).contains([1.0, 2.0, 3.0])


class TestOrder:
    def test_orthant_pairs(self):
        c = coordinate_cone(2)
        assert c.order_leq([0.0, 0.0], [1.0, 1.0])
        assert not c.order_leq([1.0, 0.0], [0.0, 1.0])  # incomparable

    def test_wedge(self):
        assert wedge().order_leq([0.0, 0.0], [2.0, 1.0])


class TestDual:
    def test_orthant_self_dual(self):
        for n in (1, 2, 3, 5, 8):
            d = coordinate_cone(n).dual()
            assert d.kind == "coordinate" and d.dim == n

    def test_wedge_dual(self):
        d = wedge().dual()
        # {y : y1 >= 0, y1 + y2 >= 0}: check both inclusions on extreme rays
        for ray in ([0.0, 1.0], [1.0, -1.0], [1.0, 0.0]):
            assert d.contains(ray)
        for out in ([-0.1, 1.0], [0.5, -0.6]):
            assert not d.contains(out)

    def test_redundant_generator_same_dual(self):
        d = PolyhedralCone(2, generators=[[1, 0], [0, 1], [1, 1]]).dual()
        rng = np.random.default_rng(0)
        for _ in range(200):
            x = rng.normal(size=2)
            assert d.contains(x) == coordinate_cone(2).contains(x)

    def test_double_dual_membership(self):
        rng = np.random.default_rng(1)
        for cone in (wedge(), PolyhedralCone(3, generators=[[1, 0, 0.3], [0, 1, 0.3], [-1, -1, 1.0]])):
            dd = cone.dual().dual()
            for _ in range(300):
                x = rng.normal(size=cone.dim)
                assert cone.contains(x) == dd.contains(x)

    def test_lower_dimensional_rejected(self):
        ray = PolyhedralCone(2, generators=[[1.0, 0.0]])
        with pytest.raises(UnsupportedRepresentation):
            ray.dual()

    def test_general_without_generators_above_dim3(self):
        with pytest.raises(UnsupportedRepresentation):
            PolyhedralCone(4, halfspaces=np.eye(4))


class TestInterior:
    def test_strictly_positive_coordinates(self):
        c = coordinate_cone(3)
        assert c.interior_contains([1.0, 1.0, 1.0])
        assert not c.interior_contains([1.0, 0.0, 1.0])

    def test_halfspace_cone(self):
        c = PolyhedralCone(2, halfspaces=[[1.0, 0.0], [1.0, 1.0]])
        assert c.interior_contains([1.0, 0.0])

    def test_interior_implies_membership_after_perturbation(self):
        rng = np.random.default_rng(2)
        cones = [coordinate_cone(3), wedge(),
                 PolyhedralCone(3, generators=[[1, 0, 0.4], [0, 1, 0.4], [-1, 0, 0.4], [0, -1, 0.4]])]
        for cone in cones:
            x = np.sum(cone.generators, axis=0)
            assert cone.interior_contains(x)
            for _ in range(25):
                b = rng.normal(size=cone.dim)
                b /= np.linalg.norm(b)
                eps = 1e-2
                ok = False
                while eps >= 1e-13:
                    if cone.contains(x - eps * b, tol=0.0):
                        ok = True
                        break
                    eps /= 10.0
                assert ok, "interior point not robust to small perturbations"


class TestStrictlyPositive:
    def test_orthant(self):
        c = coordinate_cone(2)
        assert c.is_strictly_positive([1.0, 1.0])
        assert not c.is_strictly_positive([1.0, 0.0])  # vanishes on e2

    def test_wedge(self):
        # <(1,-0.5),(1,0)> = 1 > 0, <(1,-0.5),(1,1)> = 0.5 > 0
        assert wedge().is_strictly_positive([1.0, -0.5])
        assert not wedge().is_strictly_positive([0.0, 1.0])

    def test_equivalent_to_dual_interior(self):
        rng = np.random.default_rng(3)
        cones = [coordinate_cone(2), coordinate_cone(3), wedge(),
                 PolyhedralCone(3, generators=np.eye(3) + 0.2)]
        for cone in cones:
            dual = cone.dual()
            for _ in range(200):
                f = rng.normal(size=cone.dim)
                assert cone.is_strictly_positive(f) == dual.interior_contains(f)


class TestConstruction:
    def test_degenerate_rejected(self):
        with pytest.raises(InvalidCone):
            PolyhedralCone(1, halfspaces=[[1.0], [-1.0]])

    def test_line_rejected(self):
        with pytest.raises(InvalidCone):
            PolyhedralCone(2, generators=[[1.0, 0.0], [-1.0, 0.0]])

    def test_halfplane_rejected(self):
        # single halfspace in the plane contains the line x1 = 0
        with pytest.raises(InvalidCone):
            PolyhedralCone(2, halfspaces=[[1.0, 0.0]])

    def test_cross_consistency(self):
        with pytest.raises(InvalidCone):
            PolyhedralCone(2, halfspaces=[[1.0, 0.0], [0.0, 1.0]],
                           generators=[[1.0, -1.0], [1.0, 1.0]])

    def test_mismatched_reps_rejected(self):
        # cross-consistent pair describing different cones: ray vs quadrant
        with pytest.raises(InvalidCone):
            PolyhedralCone(2, halfspaces=[[1.0, 0.0], [0.0, 1.0]],
                           generators=[[1.0, 0.0]])

    def test_weighted_coordinate(self):
        c = weighted_coordinate_cone([1.0, 2.0, 0.5])
        assert c.contains([1.0, 1.0, 1.0])
        assert not c.contains([-1.0, 1.0, 1.0])
        assert c.dual().kind == "coordinate"

    def test_coordinate_halfspaces_are_basis(self):
        c = coordinate_cone(4)
        assert np.array_equal(c.halfspaces, np.eye(4))
