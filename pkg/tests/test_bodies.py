"""Support evaluation, gradients, projections, sampling, and body invariants."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from fiberbody.bodies import (
    Ball,
    Disc,
    Discotope,
    Elliptope,
    LinearImage,
    MinkowskiSum,
    Polytope,
    ProjectionSplit,
    SampledSupport,
    Scaled,
    Schneider,
    Zonotope,
    one_sided_derivative,
    project_support,
    sphere_sample,
    support,
    support_gradient,
)
from fiberbody.errors import DimensionError, ValidationError


def all_variants():
    """One representative of every body variant sharing ambient dimension 3."""
    cube = Zonotope(2.0 * np.eye(3))
    return [
        Polytope([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]),
        cube,
        Disc([0.0, 0.5, 1.0]),
        Discotope(np.eye(3)),
        Schneider(-0.3),
        Elliptope(),
        Ball(1.5),
        MinkowskiSum((cube, Ball(0.5))),
        Scaled(-1.5, Elliptope()),
        LinearImage(np.diag([1.0, 2.0, 0.5]), cube),
    ]


class TestSupportValues:
    def test_cube_diagonal(self, cube):
        assert support(cube, [1, 1, 1]) == pytest.approx(3.0, abs=1e-12)

    def test_disc_ignores_axis_component(self):
        assert support(Disc([0, 0, 1]), [3, 4, 12]) == pytest.approx(5.0, abs=1e-12)

    def test_schneider_pole(self):
        # 1 + alpha at the pole
        assert support(Schneider(-0.25), [0, 0, 1]) == pytest.approx(0.75, abs=1e-12)

    def test_elliptope_pole(self, elliptope):
        assert support(elliptope, [0, 0, 1]) == pytest.approx(1.0, abs=1e-12)

    def test_elliptope_vertex_direction(self, elliptope):
        # the tetrahedron vertex (1,1,1) lies on the boundary
        assert support(elliptope, [1, 1, 1]) == pytest.approx(3.0, abs=1e-12)

    def test_elliptope_brute_force(self, elliptope):
        # independent oracle: dense rejection sample of the membership set
        rng = np.random.default_rng(7)
        pts = rng.uniform(-1, 1, size=(200_000, 3))
        g = np.einsum("ij,ij->i", pts, pts) - 2 * pts[:, 0] * pts[:, 1] * pts[:, 2]
        inside = pts[g <= 1.0]
        for u in ([0.3, -1.2, 0.5], [1.0, 1.0, 0.0], [-0.2, 0.4, 1.1]):
            brute = float(np.max(inside @ np.asarray(u)))
            assert support(elliptope, u) >= brute - 1e-9
            # generous upper slack: maxima at the four vertices are nearly
            # unreachable by uniform rejection samples
            assert support(elliptope, u) <= brute + 0.08

    def test_dimension_mismatch(self, cube):
        with pytest.raises(DimensionError):
            support(cube, [1.0, 2.0])

    def test_scaled_negative_factor_reflects(self, tetrahedron):
        body = Scaled(-2.0, tetrahedron)
        u = np.array([0.3, -0.7, 1.1])
        assert support(body, u) == pytest.approx(support(tetrahedron, -2.0 * u), abs=1e-12)


class TestGradients:
    def test_cube_sign_vector(self, cube):
        npt.assert_allclose(support_gradient(cube, [1, 2, 3]), [1, 1, 1], atol=1e-6)

    def test_disc_unit_vector_in_plane(self):
        npt.assert_allclose(support_gradient(Disc([1, 0, 0]), [0, 3, 4]),
                            [0, 0.6, 0.8], atol=1e-8)

    def test_schneider_pole_gradient(self):
        # direct differentiation of the definition gives (0, 0, 1 + alpha)
        npt.assert_allclose(support_gradient(Schneider(-0.25), [0, 0, 1]),
                            [0, 0, 0.75], atol=1e-8)

    def test_gradient_is_boundary_point_for_ball(self):
        g = support_gradient(Ball(2.0), [1.0, 1.0, 0.0])
        npt.assert_allclose(g, [math.sqrt(2), math.sqrt(2), 0.0], atol=1e-8)


class TestOneSidedDerivative:
    def test_cube_facet_support(self, cube):
        assert one_sided_derivative(cube, [1, 0, 0], [0, 1, 0]) == pytest.approx(1.0, abs=1e-9)

    def test_disc_face_is_whole_disc(self):
        assert one_sided_derivative(Disc([1, 0, 0]), [1, 0, 0], [0, 1, 0]) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_zero_direction(self, cube):
        assert one_sided_derivative(cube, [1, 1, 1], [0, 0, 0]) == 0.0


class TestProjectSupport:
    def test_elliptope_interval(self, elliptope, split12):
        assert project_support(elliptope, split12, [1.0]) == pytest.approx(1.0, abs=1e-12)

    def test_cube(self, cube, split12):
        assert project_support(cube, split12, [-1.0]) == pytest.approx(1.0, abs=1e-12)

    def test_dice(self, dice, split12):
        # only the two discs with off-axis extent contribute
        assert project_support(dice, split12, [1.0]) == pytest.approx(2.0, abs=1e-12)


class TestSphereSample:
    def test_circle_grid_of_four(self):
        pts = sphere_sample(2, 4, "uniform-grid")
        npt.assert_allclose(pts, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-12)

    def test_axes_in_three_dimensions(self):
        pts = sphere_sample(3, 6, "uniform-grid")
        npt.assert_allclose(np.abs(pts), np.vstack([np.eye(3), np.eye(3)]), atol=1e-12)

    @pytest.mark.parametrize("mode", ["uniform-grid", "fibonacci", "seeded-random"])
    @pytest.mark.parametrize("dim,count", [(2, 17), (3, 40), (4, 9)])
    def test_unit_norms(self, mode, dim, count):
        pts = sphere_sample(dim, count, mode, seed=3)
        npt.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)

    def test_axes_included_when_count_allows(self):
        pts = sphere_sample(3, 20, "uniform-grid")
        for e in np.vstack([np.eye(3), -np.eye(3)]):
            assert np.min(np.linalg.norm(pts - e, axis=1)) < 1e-12


class TestBodyInvariants:
    @pytest.mark.parametrize("body", all_variants(), ids=lambda b: type(b).__name__)
    def test_subadditivity(self, body):
        rng = np.random.default_rng(11)
        for _ in range(200):
            u = rng.standard_normal(3)
            v = rng.standard_normal(3)
            assert support(body, u + v) <= support(body, u) + support(body, v) + 1e-9

    @pytest.mark.parametrize("body", all_variants(), ids=lambda b: type(b).__name__)
    def test_positive_homogeneity(self, body):
        rng = np.random.default_rng(12)
        for _ in range(20):
            u = rng.standard_normal(3)
            t = float(rng.uniform(0.1, 5.0))
            h = support(body, u)
            assert support(body, t * u) == pytest.approx(t * h, abs=1e-12 * (1 + abs(t * h)))

    def test_sum_rule_exact(self, cube, elliptope):
        body = MinkowskiSum((cube, elliptope))
        rng = np.random.default_rng(13)
        for _ in range(50):
            u = rng.standard_normal(3)
            assert support(body, u) == support(cube, u) + support(elliptope, u)

    def test_linear_image_rule(self, cube):
        rng = np.random.default_rng(14)
        T = rng.standard_normal((3, 3))
        body = LinearImage(T, cube)
        for _ in range(50):
            u = rng.standard_normal(3)
            assert support(body, u) == pytest.approx(support(cube, T.T @ u), abs=1e-12)

    def test_disc_rotation_invariance(self):
        axis = np.array([1.0, 2.0, 2.0])
        disc = Disc(axis)
        rng = np.random.default_rng(15)
        v = axis / np.linalg.norm(axis)
        for _ in range(25):
            u = rng.standard_normal(3)
            theta = float(rng.uniform(0, 2 * math.pi))
            K = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
            R = np.eye(3) + math.sin(theta) * K + (1 - math.cos(theta)) * (K @ K)
            assert support(disc, R @ u) == pytest.approx(support(disc, u), abs=1e-12)


class TestProjectionSplit:
    def test_coordinate_split_roundtrip(self):
        sp = ProjectionSplit.coordinate(2, 3)
        z = np.arange(5.0)
        npt.assert_allclose(sp.embed(sp.project_V(z), sp.project_W(z)), z)
        assert sp.is_coordinate()

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValidationError):
            ProjectionSplit(1, 2, [[1.0, 0.0, 0.1]], [[0, 1, 0], [0, 0, 1]])

    def test_rejects_bad_dims(self):
        with pytest.raises(ValidationError):
            ProjectionSplit.coordinate(0, 3)

    def test_rotated_split(self):
        c, s = math.cos(0.3), math.sin(0.3)
        sp = ProjectionSplit(1, 2, [[c, s, 0]], [[-s, c, 0], [0, 0, 1]])
        assert not sp.is_coordinate()
        npt.assert_allclose(sp.project_V(sp.embed_V([2.0])), [2.0], atol=1e-12)


class TestBodyValidation:
    def test_sum_mixed_dimensions(self):
        with pytest.raises(ValidationError):
            MinkowskiSum((Ball(1.0, 2), Ball(1.0, 3)))

    def test_schneider_alpha_range(self):
        with pytest.raises(ValidationError):
            Schneider(-0.5)
        with pytest.raises(ValidationError):
            Schneider(0.0)

    def test_discotope_parallel_axes(self):
        with pytest.raises(ValidationError):
            Discotope([[1, 0, 0], [2, 0, 0]])

    def test_zonotope_zero_generator(self):
        with pytest.raises(ValidationError):
            Zonotope([[1, 0, 0], [0, 0, 0]])


class TestSampledSupport:
    def test_unit_norm_enforced(self):
        with pytest.raises(ValidationError):
            SampledSupport(2, [[1.0, 1.0]], [1.0])

    def test_negative_width_rejected(self):
        with pytest.raises(ValidationError):
            SampledSupport(2, [[1.0, 0.0], [-1.0, 0.0]], [1.0, -2.0])

    def test_empty_is_fine(self):
        s = SampledSupport(2, np.zeros((0, 2)), np.zeros(0))
        assert len(s) == 0
