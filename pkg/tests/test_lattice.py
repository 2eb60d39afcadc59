import math

import numpy as np
import pytest

from conegen.lattice import (GridMismatch, SupportSample, convex_hull_2d,
                             direction_grid, hausdorff_distance,
                             hausdorff_distance_definitional, lattice_join,
                             lattice_meet, support_function, support_values,
                             verify_order_isometry)

SQUARE = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]


def random_polytope(rng, max_pts=8):
    k = int(rng.integers(1, max_pts))
    return rng.normal(size=(k, 2)) * rng.uniform(0.3, 2.0) + rng.uniform(-1, 1, 2)


class TestSupportFunction:
    def test_square_axis(self):
        assert support_function(SQUARE, [1.0, 0.0]) == 1.0

    def test_square_diagonal(self):
        d = np.array([1.0, 1.0]) / math.sqrt(2.0)
        assert support_function(SQUARE, d) == pytest.approx(math.sqrt(2.0))

    def test_singleton(self):
        assert support_function([[2.0, -3.0]], [0.5, 0.5]) == pytest.approx(-0.5)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            support_function(np.zeros((0, 2)), [1.0, 0.0])

    def test_sublinear(self):
        rng = np.random.default_rng(29)
        for _ in range(100):
            P = random_polytope(rng)
            d1, d2 = rng.normal(size=2), rng.normal(size=2)
            assert support_function(P, d1 + d2) <= \
                support_function(P, d1) + support_function(P, d2) + 1e-12


class TestHausdorff:
    def test_identical(self):
        assert hausdorff_distance(SQUARE, SQUARE)[0] == 0.0

    def test_square_vs_origin(self):
        d, info = hausdorff_distance(SQUARE, [[0.0, 0.0]])
        assert d == pytest.approx(math.sqrt(2.0), abs=1e-12)
        assert info["exact"]

    def test_segment_vs_point(self):
        d, _ = hausdorff_distance([[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0]])
        assert d == pytest.approx(1.0, abs=1e-12)

    def test_hoermander_identity_random_pairs(self):
        rng = np.random.default_rng(30)
        for _ in range(200):
            A, B = random_polytope(rng), random_polytope(rng)
            support_route, _ = hausdorff_distance(A, B)
            assert support_route == pytest.approx(
                hausdorff_distance_definitional(A, B), abs=1e-9)

    def test_metric_axioms(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            A, B, C = (random_polytope(rng) for _ in range(3))
            dab, _ = hausdorff_distance(A, B)
            dba, _ = hausdorff_distance(B, A)
            dac, _ = hausdorff_distance(A, C)
            dcb, _ = hausdorff_distance(C, B)
            assert dab == dba
            assert dab <= dac + dcb + 1e-9

    def test_sampled_mode_reports_resolution(self):
        d, info = hausdorff_distance([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
                                     [[0.0, 0.0, 0.0]], n_sample=4096)
        assert not info["exact"]
        assert d <= 1.0 + 1e-12
        assert d + info["resolution_bound"] >= 1.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            hausdorff_distance(np.zeros((0, 2)), SQUARE)


class TestLatticeOps:
    def grid(self):
        return direction_grid(2, 128)

    def test_join_idempotent(self):
        h = SupportSample.from_polytope(SQUARE, self.grid())
        j = lattice_join(h, h)
        assert np.array_equal(j.values, h.values)

    def test_join_of_points_is_hull_support(self):
        D = self.grid()
        a = SupportSample.from_polytope([[1.0, 0.0]], D)
        b = SupportSample.from_polytope([[0.0, 1.0]], D)
        j = lattice_join(a, b)
        assert j.values[0] == pytest.approx(1.0)  # d = (1, 0)
        hull = convex_hull_2d([[1.0, 0.0], [0.0, 1.0]])
        assert np.allclose(j.values, support_values(hull, D))

    def test_join_dominates_arguments(self):
        rng = np.random.default_rng(32)
        D = self.grid()
        a = SupportSample.from_polytope(random_polytope(rng), D)
        b = SupportSample.from_polytope(random_polytope(rng), D)
        j = lattice_join(a, b)
        assert np.all(j.values >= a.values - 1e-15)
        assert np.all(j.values >= b.values - 1e-15)

    def test_join_correctness_random(self):
        rng = np.random.default_rng(33)
        D = self.grid()
        for _ in range(50):
            A, B = random_polytope(rng), random_polytope(rng)
            j = lattice_join(SupportSample.from_polytope(A, D),
                             SupportSample.from_polytope(B, D))
            hull = convex_hull_2d(np.vstack([A, B]))
            assert np.allclose(j.values, support_values(hull, D), atol=1e-12)

    def test_meet_idempotent_and_tagged(self):
        h = SupportSample.from_polytope(SQUARE, self.grid())
        m = lattice_meet(h, h)
        assert np.array_equal(m.values, h.values)
        assert m.kind == "function_lattice"

    def test_meet_below_arguments(self):
        D = self.grid()
        a = SupportSample.from_polytope([[0.0, 0.0], [1.0, 0.0]], D)
        b = SupportSample.from_polytope([[0.0, 0.0], [0.0, 1.0]], D)
        m = lattice_meet(a, b)
        assert m.values[0] == pytest.approx(0.0)  # min(1, 0) at d = (1,0)
        assert np.all(m.values <= a.values + 1e-15)

    def test_grid_mismatch(self):
        a = SupportSample.from_polytope(SQUARE, direction_grid(2, 64))
        b = SupportSample.from_polytope(SQUARE, direction_grid(2, 128))
        with pytest.raises(GridMismatch):
            lattice_join(a, b)


class TestOrderIsometry:
    def test_translates(self):
        t = np.array([0.6, -0.8])
        A = np.array(SQUARE)
        rep = verify_order_isometry(A, A + t)
        assert rep["isometry_holds"]
        assert rep["support_route"] == pytest.approx(1.0, abs=1e-9)  # ||t||

    def test_nested_squares(self):
        # with the Euclidean default ball the outer corner is sqrt(2) away
        # from the inner square, and both routes agree on that value
        inner = np.array(SQUARE)
        outer = 2.0 * inner
        rep = verify_order_isometry(inner, outer)
        assert rep["isometry_holds"]
        assert rep["support_route"] == pytest.approx(math.sqrt(2.0), abs=1e-9)
        assert rep["a_subset_b"] and not rep["b_subset_a"]
        assert rep["order_preserved"]

    def test_identical(self):
        rep = verify_order_isometry(SQUARE, SQUARE)
        assert rep["support_route"] == 0.0 and rep["definitional"] == 0.0

    def test_order_preservation_random(self):
        rng = np.random.default_rng(34)
        for _ in range(100):
            A = random_polytope(rng)
            B = random_polytope(rng)
            assert verify_order_isometry(A, B)["order_preserved"]

    def test_non_2d_routes_to_sampled(self):
        rep = verify_order_isometry(np.eye(3), 2 * np.eye(3))
        assert not rep["exact"]
        assert rep["isometry_holds"] is None
