"""Slice supports, fiber integration, faces, and strict-convexity detection."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from fiberbody.bodies import (
    Polytope,
    ProjectionSplit,
    Scaled,
    LinearImage,
    Zonotope,
    sphere_sample,
    support,
)
from fiberbody.errors import EmptySliceError, UnsupportedDimensionError, ValidationError
from fiberbody.inflation import elliptope_fiber_closed
from fiberbody.slicer import (
    QuadratureRule,
    SliceQuery,
    face_fiber_support,
    fiber_body_sampled,
    fiber_strict_convexity,
    fiber_support_numeric,
    slice_support,
    strict_convexity_direction,
)
from fiberbody.zonoids import fiber_zonotope, zonotope_support

from conftest import random_zonotopes

RULE64 = QuadratureRule(nodes_per_axis=64)


class TestSliceSupport:
    def test_elliptope_central_slice(self, elliptope, split12):
        q = SliceQuery(np.array([0.0]), np.array([1.0, 0.0]))
        assert slice_support(elliptope, split12, q) == pytest.approx(1.0, abs=1e-8)

    def test_elliptope_off_center(self, elliptope, split12):
        q = SliceQuery(np.array([0.5]), np.array([1.0, 1.0]))
        assert slice_support(elliptope, split12, q) == pytest.approx(math.sqrt(3), abs=1e-8)

    def test_cube_slice_is_square(self, cube, split12):
        q = SliceQuery(np.array([0.3]), np.array([0.0, 1.0]))
        assert slice_support(cube, split12, q) == pytest.approx(1.0, abs=1e-8)

    def test_outside_raises(self, elliptope, split12):
        with pytest.raises(EmptySliceError):
            slice_support(elliptope, split12, SliceQuery(np.array([1.0]), np.array([1.0, 0.0])))
        with pytest.raises(EmptySliceError):
            slice_support(elliptope, split12, SliceQuery(np.array([1.5]), np.array([1.0, 0.0])))

    def test_positive_tolerance_required(self):
        with pytest.raises(ValidationError):
            SliceQuery(np.array([0.0]), np.array([1.0, 0.0]), tol=0.0)

    def test_two_dimensional_projection(self):
        # [-1,1]^4 with a 2+2 split: every slice is the square [-1,1]^2
        body = Zonotope(2.0 * np.eye(4))
        sp = ProjectionSplit.coordinate(2, 2)
        q = SliceQuery(np.array([0.2, -0.4]), np.array([1.0, 1.0]))
        assert slice_support(body, sp, q) == pytest.approx(2.0, abs=1e-7)

    def test_concavity_in_slice_point(self, elliptope, split12):
        # x -> h_{K_x}(u) is concave along pi(K)
        rng = np.random.default_rng(5)
        for _ in range(10):
            u = rng.standard_normal(2)
            a, b = sorted(rng.uniform(-0.95, 0.95, size=2))
            h = [
                slice_support(elliptope, split12, SliceQuery(np.array([x]), u))
                for x in (a, 0.5 * (a + b), b)
            ]
            assert h[1] >= 0.5 * (h[0] + h[2]) - 1e-8


class TestFiberSupportNumeric:
    def test_elliptope_diagonal(self, elliptope, split12):
        val = fiber_support_numeric(elliptope, split12, [1.0, 1.0], RULE64)
        assert val == pytest.approx(8.0 / 3.0, rel=1e-3)

    def test_cube_axis(self, cube, split12):
        val = fiber_support_numeric(cube, split12, [1.0, 0.0], RULE64)
        assert val == pytest.approx(2.0, abs=1e-3)

    def test_scaled_elliptope_quartic_factor(self, elliptope, split12):
        val = fiber_support_numeric(Scaled(2.0, elliptope), split12, [1.0, 1.0], RULE64)
        assert val == pytest.approx(32.0 / 3.0, abs=4e-3)

    def test_zero_direction(self, cube, split12):
        assert fiber_support_numeric(cube, split12, [0.0, 0.0], RULE64) == 0.0

    def test_unsupported_projection_dimension(self):
        body = Zonotope(2.0 * np.eye(5))
        with pytest.raises(UnsupportedDimensionError):
            fiber_support_numeric(body, ProjectionSplit.coordinate(3, 2), [1.0, 0.0], RULE64)

    def test_degenerate_projection_gives_zero(self, split12):
        # a disc with axis e1 projects to the single point {0}
        from fiberbody.bodies import Disc

        assert fiber_support_numeric(Disc([1, 0, 0]), split12, [1.0, 0.0], RULE64) == 0.0

    def test_monte_carlo_rule(self, cube, split12):
        rule = QuadratureRule(kind="monte-carlo", nodes_per_axis=4000, seed=9)
        val = fiber_support_numeric(cube, split12, [1.0, 0.0], rule)
        assert val == pytest.approx(2.0, abs=5e-2)
        again = fiber_support_numeric(cube, split12, [1.0, 0.0], rule)
        assert val == again  # deterministic per seed


class TestFiberBodySampled:
    def test_elliptope_axes(self, elliptope, split12):
        dirs = sphere_sample(2, 4, "uniform-grid")
        out = fiber_body_sampled(elliptope, split12, dirs, RULE64)
        npt.assert_allclose(out.values, 2.0, atol=2e-3)

    def test_central_symmetry(self, elliptope, split12):
        dirs = sphere_sample(2, 6, "fibonacci")
        plus = fiber_body_sampled(elliptope, split12, dirs, RULE64)
        minus = fiber_body_sampled(elliptope, split12, -dirs, RULE64)
        npt.assert_allclose(plus.values, minus.values, atol=1e-9)

    def test_empty_directions(self, elliptope, split12):
        out = fiber_body_sampled(elliptope, split12, np.zeros((0, 2)), RULE64)
        assert len(out) == 0


class TestFaceFiberSupport:
    def test_fiber_cube_edge(self, cube, split12):
        # fiber body is [-2,2]^2; the face at (1,0) is the edge {2} x [-2,2]
        assert face_fiber_support(cube, split12, [1, 0], [0, 1], RULE64) == pytest.approx(
            2.0, abs=1e-2
        )
        assert face_fiber_support(cube, split12, [1, 0], [1, 0], RULE64) == pytest.approx(
            2.0, abs=1e-2
        )

    def test_strictly_convex_face_is_gradient(self, elliptope, split12):
        # fiber elliptope is strictly convex: face = gradient point; its
        # second coordinate vanishes at u = (1, 0) by symmetry
        val = face_fiber_support(elliptope, split12, [1, 0], [0, 1], RULE64)
        h = elliptope_fiber_closed
        grad2 = (h([1.0, 1e-6]) - h([1.0, -1e-6])) / 2e-6
        assert abs(val - grad2) <= 1e-2


class TestStrictConvexity:
    def test_square_face_width(self):
        square = Zonotope(4.0 * np.eye(2))  # [-2, 2]^2
        verdict = strict_convexity_direction(square.support, [1.0, 0.0])
        assert not verdict.strict
        assert verdict.face_width == pytest.approx(4.0, abs=1e-6)

    def test_disc_strict(self):
        h = lambda u: float(np.linalg.norm(u))
        verdict = strict_convexity_direction(h, [0.6, 0.8], tol=1e-6)
        assert verdict.strict
        assert verdict.face_width <= 1e-6

    def test_fiber_elliptope_strict(self):
        u = np.array([1.0, 1.0]) / math.sqrt(2)
        verdict = strict_convexity_direction(lambda w: elliptope_fiber_closed(w), u, tol=1e-4)
        assert verdict.strict

    def test_fiber_fraction_elliptope(self, elliptope, split12):
        frac = fiber_strict_convexity(elliptope, split12, [1.0, 0.0], x_samples=50)
        assert frac == 1.0

    def test_fiber_fraction_cube(self, cube, split12):
        frac = fiber_strict_convexity(cube, split12, [1.0, 0.0], x_samples=50)
        assert frac == 0.0

    def test_fiber_fraction_dice(self, dice, split12):
        # slices over |x| < 1 contain a flat segment cut from a boundary
        # disc, slices over 1 < |x| < 2 are strictly convex, so the strict
        # fraction is one half (cross-checked by the face-width integral
        # of the fiber body, which is pi at direction (1, 0))
        frac = fiber_strict_convexity(dice, split12, [1.0, 0.0], x_samples=50)
        assert frac == pytest.approx(0.5, abs=0.06)


class TestSlicerInvariants:
    def test_route_agreement_with_exact_zonotopes(self, split12):
        dirs = sphere_sample(2, 32, "uniform-grid")
        bodies = [Zonotope(2.0 * np.eye(3))] + random_zonotopes(2, seed=21)
        for body in bodies:
            gens = fiber_zonotope(body.generators, split12)
            for d in dirs:
                exact = zonotope_support(gens, d)
                numeric = fiber_support_numeric(body, split12, d, RULE64)
                assert abs(numeric - exact) <= 1e-2 * (1.0 + abs(exact))

    def test_route_agreement_two_dimensional_projection(self):
        # [-1,1]^4, split 2+2: exact fiber body is the square [-4,4]^2
        body = Zonotope(2.0 * np.eye(4))
        sp = ProjectionSplit.coordinate(2, 2)
        rule = QuadratureRule(kind="tensor-gauss", nodes_per_axis=12)
        gens = fiber_zonotope(body.generators, sp)
        for d in sphere_sample(2, 8, "uniform-grid"):
            exact = zonotope_support(gens, d)
            numeric = fiber_support_numeric(body, sp, d, rule)
            assert abs(numeric - exact) <= 1e-2 * (1.0 + abs(exact))

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_scaling_homogeneity(self, elliptope, split12, lam):
        u = np.array([0.8, -0.6])
        base = fiber_support_numeric(elliptope, split12, u, RULE64)
        scaled = fiber_support_numeric(Scaled(lam, elliptope), split12, u, RULE64)
        assert scaled == pytest.approx(lam**2 * base, abs=3e-3 * (1 + lam**2 * base))

    def test_gl_equivariance(self, elliptope, split12):
        rng = np.random.default_rng(77)
        for _ in range(2):
            g1 = float(rng.uniform(0.5, 1.5)) * float(rng.choice([-1.0, 1.0]))
            g2 = rng.uniform(-1.0, 1.0, size=(2, 2)) + 1.5 * np.eye(2)
            block = np.zeros((3, 3))
            block[0, 0] = g1
            block[1:, 1:] = g2
            transformed = LinearImage(block, elliptope)
            for u in sphere_sample(2, 4, "fibonacci"):
                lhs = fiber_support_numeric(transformed, split12, u, RULE64)
                rhs = abs(g1) * fiber_support_numeric(elliptope, split12, g2.T @ u, RULE64)
                assert abs(lhs - rhs) <= 1e-2 * (1 + abs(rhs))

    def test_monotone_sandwich(self, tetrahedron, elliptope, cube, split12):
        dirs = sphere_sample(2, 16, "uniform-grid")
        for d in dirs:
            h_t = fiber_support_numeric(tetrahedron, split12, d, RULE64)
            h_e = fiber_support_numeric(elliptope, split12, d, RULE64)
            h_c = fiber_support_numeric(cube, split12, d, RULE64)
            assert h_t <= h_e + 1e-9 + 2e-3
            assert h_e <= h_c + 1e-9 + 2e-3
