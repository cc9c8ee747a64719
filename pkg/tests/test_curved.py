"""Curvature validation and the gradient-Jacobian fiber route."""

import math
import warnings

import numpy as np
import numpy.testing as npt
import pytest

from fiberbody.bodies import Ball, ProjectionSplit, Schneider, sphere_sample
from fiberbody.curved import (
    CurvedIntegrand,
    curvature_validate,
    curved_fiber_gradient,
    curved_fiber_support,
    projected_gradient,
    quartic_fit,
    schneider_fiber_closed,
    schneider_printed_coefficients,
    schneider_quartic_report,
)
from fiberbody.errors import DomainError, NotCurvedError, ValidationError
from fiberbody.slicer import QuadratureRule, fiber_support_numeric


# exact quartic coefficients of the fiber support, derived symbolically from
# the support-function definition (c1 u2^4 + c2 u2^2 u3^2 + c3 u3^4, times
# pi/64 over ||u||^3); the first one is the square of the printed factor
def true_coefficients(alpha):
    return (
        8 * alpha**2 - 32 * alpha + 32,
        -8 * alpha**2 - 16 * alpha + 64,
        -25 * alpha**2 + 16 * alpha + 32,
    )


def quartic_value(alpha, u):
    c1, c2, c3 = true_coefficients(alpha)
    a, b = u
    norm = math.hypot(a, b)
    return math.pi / 64 * (c1 * a**4 + c2 * a**2 * b**2 + c3 * b**4) / norm**3


class TestCurvatureValidate:
    def test_ball_unit_curvature(self, unit_ball):
        report = curvature_validate(unit_ball)
        assert report.curved
        assert report.min_eigenvalue == pytest.approx(1.0, abs=1e-4)

    def test_cube_not_curved(self, cube):
        assert not curvature_validate(cube).curved

    def test_schneider_curved(self):
        report = curvature_validate(Schneider(-0.3))
        assert report.curved
        # analytic minimum of the meridian curvature radius is 1 + 2.5 alpha
        assert report.min_eigenvalue >= 0.2

    def test_elliptope_not_curved(self, elliptope):
        # flat support regions over the vertex normal cones
        assert not curvature_validate(elliptope).curved


class TestProjectedGradient:
    def test_ball_center(self, unit_ball, split12):
        ci = CurvedIntegrand(unit_ball, split12, [0.0, 1.0], validate=False)
        npt.assert_allclose(projected_gradient(ci, [0.0]), [0.0], atol=1e-9)

    def test_ball_slope(self, unit_ball, split12):
        ci = CurvedIntegrand(unit_ball, split12, [0.0, 1.0], validate=False)
        for t in (0.5, 1.0, 3.0):
            npt.assert_allclose(projected_gradient(ci, [t]), [t / math.hypot(t, 1.0)],
                                atol=1e-8)

    def test_schneider_even_symmetry(self, split12):
        ci = CurvedIntegrand(Schneider(-0.25), split12, [0.0, 1.0], validate=False)
        npt.assert_allclose(projected_gradient(ci, [0.0]), [0.0], atol=1e-9)

    def test_unit_direction_required(self, unit_ball, split12):
        with pytest.raises(ValidationError):
            CurvedIntegrand(unit_ball, split12, [1.0, 1.0], validate=False)


class TestCurvedFiberSupport:
    def test_ball_half_pi(self, unit_ball, split12):
        # fibers of the unit ball over [-1,1] are discs of radius sqrt(1-x^2)
        ci = CurvedIntegrand(unit_ball, split12, [0.0, 1.0])
        assert curved_fiber_support(ci) == pytest.approx(math.pi / 2, abs=1e-4)

    @pytest.mark.parametrize("alpha", [-0.4, -0.3, -0.25])
    def test_matches_symbolic_quartic(self, alpha, split12):
        body = Schneider(alpha)
        for d in ([1.0, 0.0], [0.0, 1.0], [0.6, 0.8]):
            ci = CurvedIntegrand(body, split12, d, validate=False)
            assert curved_fiber_support(ci) == pytest.approx(quartic_value(alpha, d), abs=2e-5)

    def test_matches_slicer_route(self, split12):
        body = Schneider(-0.25)
        rule = QuadratureRule(nodes_per_axis=64)
        for d in sphere_sample(2, 6, "fibonacci"):
            ci = CurvedIntegrand(body, split12, d, validate=False)
            a = curved_fiber_support(ci)
            b = fiber_support_numeric(body, split12, d, rule)
            assert abs(a - b) <= 1e-3 * (1 + abs(a))

    def test_central_symmetry(self, split12):
        body = Schneider(-0.3)
        d = np.array([0.28, 0.96])
        a = curved_fiber_support(CurvedIntegrand(body, split12, d, validate=False))
        b = curved_fiber_support(CurvedIntegrand(body, split12, -d, validate=False))
        assert abs(a - b) <= 1e-9

    def test_not_curved_raises(self, cube, split12):
        with pytest.raises(NotCurvedError):
            CurvedIntegrand(cube, split12, [1.0, 0.0])


class TestCurvedFiberGradient:
    def test_ball_gradient(self, unit_ball, split12):
        ci = CurvedIntegrand(unit_ball, split12, [0.0, 1.0], validate=False)
        npt.assert_allclose(curved_fiber_gradient(ci), [0.0, math.pi / 2], atol=1e-4)

    def test_euler_relation(self, split12):
        body = Schneider(-0.3)
        d = np.array([0.6, 0.8])
        ci = CurvedIntegrand(body, split12, d, validate=False)
        grad = curved_fiber_gradient(ci)
        assert float(d @ grad) == pytest.approx(curved_fiber_support(ci), abs=1e-6)

    def test_gradient_odd_under_reflection(self, split12):
        body = Schneider(-0.25)
        d = np.array([0.8, -0.6])
        g_plus = curved_fiber_gradient(CurvedIntegrand(body, split12, d, validate=False))
        g_minus = curved_fiber_gradient(CurvedIntegrand(body, split12, -d, validate=False))
        npt.assert_allclose(g_plus, -g_minus, atol=1e-6)

    def test_matches_finite_difference(self, split12):
        # compare against differences of support values along the circle;
        # the engine value carries ~1e-7 cancellation jitter (nested finite
        # differences), so the step must sit well above it
        body = Schneider(-0.3)

        def h(u):
            n = np.linalg.norm(u)
            cj = CurvedIntegrand(body, split12, u / n, fd_step=1e-4, validate=False)
            return n * curved_fiber_support(cj)

        eps = 3e-3
        for ang in np.linspace(0.2, 2.0, 8):
            d = np.array([math.cos(ang), math.sin(ang)])
            ci = CurvedIntegrand(body, split12, d, validate=False)
            grad = curved_fiber_gradient(ci)
            fd = np.empty(2)
            for i in range(2):
                e = np.zeros(2)
                e[i] = eps
                fd[i] = (h(d + e) - h(d - e)) / (2 * eps)
            npt.assert_allclose(grad, fd, atol=1e-4)


class TestPrintedClosedForm:
    def test_verbatim_values(self):
        # negative at (1, 0): the printed expression cannot be a support
        # function of a body containing the origin, which flags the defect
        val = schneider_fiber_closed(-0.25, [1.0, 0.0])
        assert val == pytest.approx(math.pi / 64 * 8 * (-0.25 - 2), abs=1e-12)
        assert val < 0
        val = schneider_fiber_closed(-0.25, [0.0, 1.0])
        assert val == pytest.approx(math.pi / 64 * 26.4375, abs=1e-12)

    def test_even(self):
        u = [0.3, -0.9]
        assert schneider_fiber_closed(-0.3, u) == schneider_fiber_closed(-0.3, [-0.3, 0.9])

    def test_domain(self):
        with pytest.raises(DomainError):
            schneider_fiber_closed(-0.25, [0.0, 0.0])
        with pytest.raises(DomainError):
            schneider_fiber_closed(-0.9, [1.0, 0.0])

    def test_last_two_coefficients_match_truth(self):
        for alpha in (-0.4, -0.3, -0.25):
            printed = schneider_printed_coefficients(alpha)
            truth = true_coefficients(alpha)
            assert printed[1] == pytest.approx(truth[1], abs=1e-12)
            assert printed[2] == pytest.approx(truth[2], abs=1e-12)
            assert printed[0] * truth[0] < 0  # sign flip in the first one


class TestQuarticStructure:
    def test_fit_residual_and_diagnosis(self):
        report = schneider_quartic_report(-0.3, quad_nodes=160, n_directions=24)
        assert report["fit_residual"] <= 1e-6
        npt.assert_allclose(report["fitted_coefficients"], true_coefficients(-0.3), atol=1e-4)
        assert report["sign_flip_first_coefficient"]
        assert "8*(alpha-2)^2" in report["diagnosis"]

    def test_quartic_fit_recovers_exact_polynomial(self):
        dirs = sphere_sample(2, 20, "fibonacci")
        vals = np.array([quartic_value(-0.25, d) for d in dirs])
        coeffs, residual = quartic_fit(dirs, vals)
        npt.assert_allclose(coeffs, true_coefficients(-0.25), atol=1e-10)
        assert residual <= 1e-12

    def test_homogeneous_subadditivity(self, split12):
        # validity check: the curved-route values extend to a support function
        body = Schneider(-0.3)
        vals = {}

        def h(u):
            key = tuple(np.round(u, 12))
            if key not in vals:
                n = np.linalg.norm(u)
                ci = CurvedIntegrand(body, split12, np.asarray(u) / n, validate=False)
                vals[key] = n * curved_fiber_support(ci, 120)
            return vals[key]

        rng = np.random.default_rng(8)
        for _ in range(200):
            u = rng.standard_normal(2)
            v = rng.standard_normal(2)
            assert h(u + v) <= h(u) + h(v) + 1e-6
