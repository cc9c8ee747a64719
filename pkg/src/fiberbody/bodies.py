"""Convex bodies as immutable description trees with support-function evaluation.

Every body exposes ``h(u) = max{<u, x> : x in K}``.  Composite bodies
(Minkowski sums, scalings, linear images) evaluate by pure recursion over the
tree, so all downstream engines can treat a body as a black-box support
oracle.  All bodies are centered (translations are out of scope).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ValidationError
from .numerics import central_gradient, one_sided_derivative as _one_sided

ORTHONORMAL_TOL = 1e-12


# ---------------------------------------------------------------------------
# projection split
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionSplit:
    """Orthogonal decomposition R^(n+m) = V + W and the projection onto V.

    basis_V has shape (n, n+m) and basis_W shape (m, n+m); rows are
    orthonormal and jointly span the ambient space.
    """

    n: int
    m: int
    basis_V: np.ndarray
    basis_W: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValidationError("projection split needs n >= 1 and m >= 1")
        bV = np.atleast_2d(np.asarray(self.basis_V, dtype=float))
        bW = np.atleast_2d(np.asarray(self.basis_W, dtype=float))
        d = self.n + self.m
        if bV.shape != (self.n, d) or bW.shape != (self.m, d):
            raise DimensionError(
                f"basis shapes {bV.shape}, {bW.shape} do not match split ({self.n}, {self.m})"
            )
        B = np.vstack([bV, bW])
        gram = B @ B.T
        if not np.allclose(gram, np.eye(d), atol=ORTHONORMAL_TOL):
            raise ValidationError("basis_V and basis_W are not jointly orthonormal")
        object.__setattr__(self, "basis_V", bV)
        object.__setattr__(self, "basis_W", bW)

    @classmethod
    def coordinate(cls, n: int, m: int) -> "ProjectionSplit":
        """V = first n coordinates, W = last m coordinates."""
        eye = np.eye(n + m)
        return cls(n, m, eye[:n], eye[n:])

    @property
    def dim(self) -> int:
        return self.n + self.m

    def is_coordinate(self) -> bool:
        eye = np.eye(self.dim)
        return bool(
            np.allclose(self.basis_V, eye[: self.n], atol=ORTHONORMAL_TOL)
            and np.allclose(self.basis_W, eye[self.n :], atol=ORTHONORMAL_TOL)
        )

    def embed(self, v_coords, w_coords) -> np.ndarray:
        """Ambient vector with the given V- and W-coordinates."""
        v = np.atleast_1d(np.asarray(v_coords, dtype=float))
        w = np.atleast_1d(np.asarray(w_coords, dtype=float))
        return v @ self.basis_V + w @ self.basis_W

    def embed_V(self, v_coords) -> np.ndarray:
        return np.atleast_1d(np.asarray(v_coords, dtype=float)) @ self.basis_V

    def embed_W(self, w_coords) -> np.ndarray:
        return np.atleast_1d(np.asarray(w_coords, dtype=float)) @ self.basis_W

    def project_V(self, z) -> np.ndarray:
        return self.basis_V @ np.asarray(z, dtype=float)

    def project_W(self, z) -> np.ndarray:
        return self.basis_W @ np.asarray(z, dtype=float)


# ---------------------------------------------------------------------------
# body variants
# ---------------------------------------------------------------------------

class Body:
    """Abstract convex body; subclasses implement ``support``."""

    dim: int

    def support(self, u: np.ndarray) -> float:
        raise NotImplementedError

    def _check(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.dim,):
            raise DimensionError(f"direction has shape {u.shape}, body is {self.dim}-dimensional")
        return u


@dataclass(frozen=True)
class Polytope(Body):
    """Convex hull of finitely many points; support = max of vertex products."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if v.size == 0:
            raise ValidationError("polytope needs at least one vertex")
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def support(self, u) -> float:
        return float(np.max(self.vertices @ np.asarray(u, dtype=float)))


@dataclass(frozen=True)
class Zonotope(Body):
    """Minkowski sum of centered segments (1/2)[-z, z] over the generators."""

    generators: np.ndarray

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if g.size == 0:
            raise ValidationError("zonotope needs at least one generator")
        if np.any(np.linalg.norm(g, axis=1) == 0.0):
            raise ValidationError("zonotope generators must be nonzero")
        object.__setattr__(self, "generators", g)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def support(self, u) -> float:
        return float(0.5 * np.sum(np.abs(self.generators @ np.asarray(u, dtype=float))))


def _disc_frame(axis: np.ndarray):
    """Deterministic orthonormal frame (a, b) of axis-perp.

    Pivot on the smallest-magnitude coordinate of the axis, Gram-Schmidt it
    against the axis, and close the frame with a cross product.  Any fixed
    rule yields the same disc; this one is reproducible across platforms.
    """
    v = axis / np.linalg.norm(axis)
    k = int(np.argmin(np.abs(v)))
    e = np.zeros(3)
    e[k] = 1.0
    a = e - v[k] * v
    a /= np.linalg.norm(a)
    b = np.cross(v, a)
    return a, b


@dataclass(frozen=True)
class Disc(Body):
    """Planar disc in 3-space: centered in axis-perp with radius ||axis||."""

    axis: np.ndarray
    dim: int = field(init=False, default=3)

    def __post_init__(self):
        v = np.asarray(self.axis, dtype=float)
        if v.shape != (3,) or not np.any(v):
            raise ValidationError("disc axis must be a nonzero 3-vector")
        object.__setattr__(self, "axis", v)

    def frame(self):
        return _disc_frame(self.axis)

    def support(self, u) -> float:
        u = np.asarray(u, dtype=float)
        v = self.axis
        nv = np.linalg.norm(v)
        # ||proj of u onto axis-perp|| equals sqrt(<u,a>^2 + <u,b>^2) for any frame
        proj = u - (u @ v) / nv**2 * v
        return float(nv * np.linalg.norm(proj))

    def boundary_point(self, u) -> np.ndarray:
        """The maximizer of <u, .> on the disc (u not parallel to the axis)."""
        u = np.asarray(u, dtype=float)
        v = self.axis
        nv = np.linalg.norm(v)
        proj = u - (u @ v) / nv**2 * v
        norm = np.linalg.norm(proj)
        if norm == 0.0:
            return np.zeros(3)
        return nv * proj / norm


@dataclass(frozen=True)
class Discotope(Body):
    """Minkowski sum of discs on pairwise non-parallel axes in 3-space."""

    axes: np.ndarray
    dim: int = field(init=False, default=3)

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.axes, dtype=float))
        if a.shape[1] != 3 or a.shape[0] < 1:
            raise ValidationError("discotope needs 3-dimensional axes")
        units = a / np.linalg.norm(a, axis=1, keepdims=True)
        for i in range(len(units)):
            for j in range(i + 1, len(units)):
                if min(np.linalg.norm(units[i] - units[j]),
                       np.linalg.norm(units[i] + units[j])) < 1e-12:
                    raise ValidationError(f"discotope axes {i} and {j} are parallel")
        object.__setattr__(self, "axes", a)

    def discs(self):
        return [Disc(v) for v in self.axes]

    def support(self, u) -> float:
        u = np.asarray(u, dtype=float)
        total = 0.0
        for v in self.axes:
            nv = np.linalg.norm(v)
            proj = u - (u @ v) / nv**2 * v
            total += nv * np.linalg.norm(proj)
        return float(total)


SCHNEIDER_ALPHA_RANGE = (-8.0 / 20.0, -5.0 / 20.0)


@dataclass(frozen=True)
class Schneider(Body):
    """Centrally symmetric 3-body with polynomial support on the sphere.

    h(u) = ||u|| (1 + alpha/2 (3 u3^2/||u||^2 - 1)); admissible alpha range
    keeps the support function convex.
    """

    alpha: float
    dim: int = field(init=False, default=3)

    def __post_init__(self):
        lo, hi = SCHNEIDER_ALPHA_RANGE
        if not (lo <= self.alpha <= hi):
            raise ValidationError(f"alpha={self.alpha} outside admissible range [{lo}, {hi}]")

    def support(self, u) -> float:
        u = np.asarray(u, dtype=float)
        n2 = float(u @ u)
        if n2 == 0.0:
            return 0.0
        return math.sqrt(n2) * (1.0 + 0.5 * self.alpha * (3.0 * u[2] ** 2 / n2 - 1.0))


@dataclass(frozen=True)
class Elliptope(Body):
    """The set of (x, y, z) in [-1,1]^3 with x^2+y^2+z^2-2xyz <= 1.

    Support is evaluated in closed form by maximizing over the first
    coordinate: the slice at x is an ellipse with support
    sqrt(u2^2 + u3^2 + 2 x u2 u3), and x -> u1 x + h_slice(x) is concave on
    [-1, 1], so the maximizer is the clamped critical point.
    """

    dim: int = field(init=False, default=3)

    def support(self, u) -> float:
        u = np.asarray(u, dtype=float)
        u1, u2, u3 = float(u[0]), float(u[1]), float(u[2])
        s = u2 * u2 + u3 * u3
        p = u2 * u3
        if p == 0.0:
            return abs(u1) + math.sqrt(s)
        if u1 == 0.0 or (u1 > 0.0) == (p > 0.0):
            x = math.copysign(1.0, p)
        else:
            x = (p * p / (u1 * u1) - s) / (2.0 * p)
            x = min(1.0, max(-1.0, x))
        return u1 * x + math.sqrt(max(s + 2.0 * p * x, 0.0))

    @staticmethod
    def contains(point, tol: float = 1e-9) -> bool:
        x, y, z = np.asarray(point, dtype=float)
        if max(abs(x), abs(y), abs(z)) > 1.0 + tol:
            return False
        return x * x + y * y + z * z - 2.0 * x * y * z <= 1.0 + tol


@dataclass(frozen=True)
class Ball(Body):
    """Euclidean ball of the given radius centered at the origin."""

    radius: float
    ambient_dim: int = 3

    def __post_init__(self):
        if self.radius < 0:
            raise ValidationError("ball radius must be nonnegative")

    @property
    def dim(self) -> int:
        return self.ambient_dim

    def support(self, u) -> float:
        return float(self.radius * np.linalg.norm(u))


@dataclass(frozen=True)
class InflatedPolytope(Body):
    """Convex body bounded by a derivative of a polytope's facet product.

    Wraps a FacetSystem from :mod:`fiberbody.inflation`; support is the
    sampled radial maximum, so evaluations are comparatively expensive.
    """

    facet_system: object  # inflation.FacetSystem
    boundary_samples: int = 512

    @property
    def dim(self) -> int:
        return self.facet_system.dim

    def support(self, u) -> float:
        from .inflation import inflation_support

        return inflation_support(self.facet_system, u, self.boundary_samples)


@dataclass(frozen=True)
class MinkowskiSum(Body):
    """Minkowski sum; support functions add."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValidationError("sum needs at least one body")
        dims = {b.dim for b in parts}
        if len(dims) != 1:
            raise ValidationError(f"sum parts have mixed ambient dimensions {sorted(dims)}")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    def support(self, u) -> float:
        return float(sum(b.support(u) for b in self.parts))


@dataclass(frozen=True)
class Scaled(Body):
    """lambda * K as a set; negative factors reflect through the origin."""

    factor: float
    inner: Body

    @property
    def dim(self) -> int:
        return self.inner.dim

    def support(self, u) -> float:
        # h_{cK}(u) = h_K(c u) covers both signs of c
        return self.inner.support(self.factor * np.asarray(u, dtype=float))


@dataclass(frozen=True)
class LinearImage(Body):
    """T K for a linear map T; support composes with the transpose."""

    matrix: np.ndarray
    inner: Body

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if M.shape[1] != self.inner.dim:
            raise DimensionError(
                f"matrix has {M.shape[1]} columns, inner body is {self.inner.dim}-dimensional"
            )
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def support(self, u) -> float:
        return self.inner.support(self.matrix.T @ np.asarray(u, dtype=float))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def support(body: Body, u) -> float:
    """Support value h_K(u); validates the direction's dimension."""
    return body.support(body._check(u))


def support_gradient(body: Body, u, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of the support function, step rel_step*||u||.

    Where h is differentiable this is the exposed boundary point; at
    nonsmooth directions it returns a subgradient-like average and callers
    that need faces should use :func:`one_sided_derivative` instead.
    """
    u = body._check(u)
    if not np.any(u):
        raise ValidationError("gradient requires u != 0")
    return central_gradient(body.support, u, rel_step)


def one_sided_derivative(body: Body, u, w, step: float = 1e-5) -> float:
    """Directional one-sided derivative D+ h(u; w) = h_{K^u}(w).

    Richardson-extrapolated one-sided differences (steps t and t/2); equals
    the support function of the face of K in direction u evaluated at w.
    """
    u = body._check(u)
    w = body._check(w)
    if not np.any(u):
        raise ValidationError("one-sided derivative requires u != 0")
    return float(_one_sided(body.support, u, w, step))


def project_support(body: Body, split: ProjectionSplit, w) -> float:
    """Support of the projected body pi(K) at V-coordinates w."""
    if split.dim != body.dim:
        raise DimensionError(f"split is {split.dim}-dimensional, body is {body.dim}-dimensional")
    w = np.atleast_1d(np.asarray(w, dtype=float))
    if w.shape != (split.n,):
        raise DimensionError(f"w has shape {w.shape}, V is {split.n}-dimensional")
    return body.support(split.embed_V(w))


# ---------------------------------------------------------------------------
# sphere sampling
# ---------------------------------------------------------------------------

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def sphere_sample(dim: int, count: int, mode: str = "uniform-grid", seed: int = 0) -> np.ndarray:
    """Deterministic or seeded unit directions in R^dim.

    uniform-grid: for dim=2 and count divisible by 4, the equiangular grid
    starting at +e1; otherwise the +/- coordinate axes first (when count
    allows) followed by deterministic low-discrepancy fill.  fibonacci:
    golden-angle spiral (circle or sphere).  seeded-random: normalized
    Gaussian samples from a seeded generator.
    """
    if dim < 1 or count < 1:
        raise ValidationError("sphere_sample needs dim >= 1 and count >= 1")
    if dim == 1:
        return np.array([[1.0] if i % 2 == 0 else [-1.0] for i in range(count)])
    if mode == "uniform-grid":
        return _grid_sample(dim, count)
    if mode == "fibonacci":
        return _fibonacci_sample(dim, count)
    if mode == "seeded-random":
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((count, dim))
        return pts / np.linalg.norm(pts, axis=1, keepdims=True)
    raise ValidationError(f"unknown sphere sampling mode {mode!r}")


def _axes(dim: int) -> np.ndarray:
    eye = np.eye(dim)
    return np.vstack([eye, -eye])


def _grid_sample(dim: int, count: int) -> np.ndarray:
    if dim == 2 and count % 4 == 0:
        ang = 2.0 * math.pi * np.arange(count) / count
        return np.c_[np.cos(ang), np.sin(ang)]
    axes = _axes(dim)
    if count <= 2 * dim:
        return axes[:count]
    fill = _fibonacci_sample(dim, count - 2 * dim, offset=0.5)
    return np.vstack([axes, fill])


def _fibonacci_sample(dim: int, count: int, offset: float = 0.0) -> np.ndarray:
    idx = np.arange(count) + offset
    if dim == 2:
        ang = idx * _GOLDEN_ANGLE
        return np.c_[np.cos(ang), np.sin(ang)]
    if dim == 3:
        z = 1.0 - (2.0 * idx + 1.0) / count
        r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        ang = idx * _GOLDEN_ANGLE
        return np.c_[r * np.cos(ang), r * np.sin(ang), z]
    # higher dimensions: deterministic generator fixed by construction
    rng = np.random.default_rng(1234567)
    pts = rng.standard_normal((count, dim))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# sampled support values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampledSupport:
    """Support values of a (fiber) body on a finite direction set.

    The universal numeric result form: every fiber route produces one of
    these, so routes can be compared mechanically.
    """

    dim: int
    directions: np.ndarray
    values: np.ndarray
    stderr: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        dirs = np.asarray(self.directions, dtype=float).reshape(-1, self.dim)
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if dirs.shape[0] != vals.shape[0]:
            raise ValidationError("directions and values must have equal length")
        if dirs.shape[0]:
            norms = np.linalg.norm(dirs, axis=1)
            if np.any(np.abs(norms - 1.0) > ORTHONORMAL_TOL):
                raise ValidationError("directions must have unit norm (tol 1e-12)")
        err = self.stderr
        if err is not None:
            err = np.asarray(err, dtype=float).reshape(-1)
            if err.shape != vals.shape:
                raise ValidationError("stderr must match values")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "stderr", err)
        self._check_widths()

    def _check_widths(self, tol: float = 1e-9):
        # h(u) + h(-u) is the width in direction u and must be >= -tol
        if not len(self.values):
            return
        index = {tuple(np.round(d, 9)): v for d, v in zip(self.directions, self.values)}
        for d, v in zip(self.directions, self.values):
            opp = index.get(tuple(np.round(-d, 9)))
            if opp is not None and v + opp < -tol:
                raise ValidationError(
                    f"negative width {v + opp:.3e} at direction {d}: not support data"
                )

    def __len__(self) -> int:
        return len(self.values)
