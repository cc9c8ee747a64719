"""Generic fiber-body engine via slice supports and quadrature over pi(K).

The support of the slice K_x = {y in W : (x, y) in K} is computed by the
infimal-projection identity

    h_{K_x}(u) = inf_{v in V} [ h_K(v + u) - <v, x> ],

valid for x strictly inside pi(K); the objective is convex in v.  The fiber
body support is then the integral of slice supports over pi(K).  This works
for every body variant since only the support oracle is used.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .bodies import Body, ProjectionSplit, SampledSupport, project_support, sphere_sample
from .errors import (
    ConvergenceWarning,
    EmptySliceError,
    UnsupportedDimensionError,
    ValidationError,
)
from .numerics import (
    bracket_minimum,
    gauss_legendre,
    golden_minimize,
    one_sided_derivative as _directional_derivative,
)

DEFAULT_SHRINK = 1.0 - 1e-4


@dataclass(frozen=True)
class QuadratureRule:
    """Discretization of the integral over pi(K).

    kind: 'gauss-legendre' (n=1), 'tensor-gauss' (n=2) or 'monte-carlo';
    integration is restricted to shrink * pi(K) because slices degenerate at
    the boundary (the infimum may be unattained there).
    """

    kind: str = "gauss-legendre"
    nodes_per_axis: int = 64
    shrink: float = DEFAULT_SHRINK
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("gauss-legendre", "tensor-gauss", "monte-carlo"):
            raise ValidationError(f"unknown quadrature kind {self.kind!r}")
        if self.nodes_per_axis < 2:
            raise ValidationError("nodes_per_axis must be >= 2")
        if not 0.0 < self.shrink <= 1.0:
            raise ValidationError("shrink must lie in (0, 1]")


@dataclass(frozen=True)
class SliceQuery:
    """A slice point x in V-coordinates, a direction u in W, and solver budget."""

    x: np.ndarray
    u: np.ndarray
    max_iter: int = 200
    tol: float = 1e-10

    def __post_init__(self):
        if self.tol <= 0:
            raise ValidationError("solver tolerance must be positive")
        object.__setattr__(self, "x", np.atleast_1d(np.asarray(self.x, dtype=float)))
        object.__setattr__(self, "u", np.atleast_1d(np.asarray(self.u, dtype=float)))


def _domain_1d(body: Body, split: ProjectionSplit):
    hi = project_support(body, split, np.array([1.0]))
    lo = -project_support(body, split, np.array([-1.0]))
    return lo, hi


def _interior_margin(body: Body, split: ProjectionSplit, x: np.ndarray, tol: float = 1e-11) -> bool:
    """True iff x is strictly inside pi(K), by support margins on probe directions."""
    if split.n == 1:
        probes = np.array([[1.0], [-1.0]])
    else:
        probes = sphere_sample(split.n, max(8, 4 * split.n), "uniform-grid")
    for w in probes:
        h = project_support(body, split, w)
        if float(w @ x) >= h - tol * (1.0 + abs(h)):
            return False
    return True


def slice_support(body: Body, split: ProjectionSplit, query: SliceQuery) -> float:
    """Support of the slice over x in direction u, by convex minimization in v.

    n=1 uses an expanding bracket from v=0 with golden-section refinement;
    n=2 uses coordinate descent with restarts plus seeded direction sweeps
    (guards against stalls of coordinate descent on piecewise-linear
    supports).  Raises EmptySliceError when x is not strictly interior.
    """
    x, u = query.x, query.u
    if x.shape != (split.n,) or u.shape != (split.m,):
        raise ValidationError("query shapes do not match the projection split")
    if not _interior_margin(body, split, x):
        raise EmptySliceError(f"slice point {x} is outside or on the boundary of pi(K)")
    u_amb = split.embed_W(u)

    if split.n == 1:
        x0 = float(x[0])

        def objective(v: float) -> float:
            return body.support(split.embed_V([v]) + u_amb) - v * x0

        scale = 1.0 + abs(x0) + np.linalg.norm(u)
        lo, hi = bracket_minimum(objective, 0.0, 0.5 * scale)
        _, val = golden_minimize(objective, lo, hi, query.tol, query.max_iter)
        return float(val)

    if split.n == 2:
        return _slice_support_2d(body, split, query, u_amb)

    raise UnsupportedDimensionError(f"slice solver supports n in {{1, 2}}, got n={split.n}")


def _slice_support_2d(body: Body, split: ProjectionSplit, query: SliceQuery,
                      u_amb: np.ndarray) -> float:
    x = query.x

    def objective(v: np.ndarray) -> float:
        return body.support(split.embed_V(v) + u_amb) - float(v @ x)

    scale = 1.0 + float(np.linalg.norm(x)) + float(np.linalg.norm(query.u))
    starts = [np.zeros(2), np.array([scale, scale]), np.array([-scale, scale])]
    rng = np.random.default_rng(12345)
    best = np.inf
    for v0 in starts:
        v = v0.copy()
        fv = objective(v)
        for sweep in range(query.max_iter):
            improved = 0.0
            dirs = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
            if sweep and sweep % 4 == 0:
                extra = rng.standard_normal((4, 2))
                dirs += [e / np.linalg.norm(e) for e in extra]
            for e in dirs:
                def line(t: float) -> float:
                    return objective(v + t * e)

                lo, hi = bracket_minimum(line, 0.0, 0.5 * scale)
                t, ft = golden_minimize(line, lo, hi, query.tol, query.max_iter)
                if ft < fv - 1e-15:
                    improved += fv - ft
                    v, fv = v + t * e, ft
            if improved <= query.tol * (1.0 + abs(fv)):
                break
        else:
            warnings.warn("slice solver budget exhausted before tolerance", ConvergenceWarning)
        best = min(best, fv)
    return float(best)


def _quad_nodes_1d(body: Body, split: ProjectionSplit, rule: QuadratureRule):
    lo, hi = _domain_1d(body, split)
    if hi - lo < 1e-12:
        return None
    center, radius = 0.5 * (hi + lo), 0.5 * (hi - lo) * rule.shrink
    if rule.kind == "monte-carlo":
        rng = np.random.default_rng(rule.seed)
        xs = rng.uniform(center - radius, center + radius, size=rule.nodes_per_axis)
        ws = np.full(rule.nodes_per_axis, 2.0 * radius / rule.nodes_per_axis)
        return xs, ws
    xs, ws = gauss_legendre(rule.nodes_per_axis, center - radius, center + radius)
    return xs, ws


def _integrate_nodes(values: np.ndarray, weights: np.ndarray) -> float:
    # fixed summation order keeps results schedule-independent
    return float(np.dot(weights, values))


def fiber_support_numeric(body: Body, split: ProjectionSplit, u,
                          rule: QuadratureRule = QuadratureRule()) -> float:
    """Fiber-body support h(u) as the integral of slice supports over pi(K).

    Nodes are placed in shrink * pi(K); a node whose slice solve fails is
    replaced by the value of the nearest successful node (endpoint limit).
    Supports n in {1, 2}.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if u.shape != (split.m,):
        raise ValidationError(f"direction has shape {u.shape}, W is {split.m}-dimensional")
    if not np.any(u):
        return 0.0
    if split.n == 1:
        nodes = _quad_nodes_1d(body, split, rule)
        if nodes is None:
            return 0.0  # pi(K) has measure zero: the fiber body is {0}
        xs, ws = nodes
        vals = np.empty_like(xs)
        failed = []
        for i, xv in enumerate(xs):
            try:
                vals[i] = slice_support(body, split, SliceQuery(np.array([xv]), u))
            except EmptySliceError:
                vals[i] = np.nan
                failed.append(i)
        if failed:
            vals = _fill_from_nearest(vals)
        return _integrate_nodes(vals, ws)
    if split.n == 2:
        return _fiber_support_2d(body, split, u, rule)
    raise UnsupportedDimensionError(f"numeric engine supports n in {{1, 2}}, got n={split.n}")


def _fill_from_nearest(vals: np.ndarray) -> np.ndarray:
    good = np.where(~np.isnan(vals))[0]
    if len(good) == 0:
        raise EmptySliceError("all quadrature nodes produced empty slices")
    out = vals.copy()
    for i in np.where(np.isnan(vals))[0]:
        out[i] = vals[good[np.argmin(np.abs(good - i))]]
    return out


def _fiber_support_2d(body: Body, split: ProjectionSplit, u, rule: QuadratureRule) -> float:
    bounds = []
    for axis in range(2):
        e = np.zeros(2)
        e[axis] = 1.0
        hi = project_support(body, split, e)
        lo = -project_support(body, split, -e)
        if hi - lo < 1e-12:
            return 0.0
        c, r = 0.5 * (hi + lo), 0.5 * (hi - lo) * rule.shrink
        bounds.append((c - r, c + r))
    if rule.kind == "monte-carlo":
        rng = np.random.default_rng(rule.seed)
        count = rule.nodes_per_axis**2
        pts = rng.uniform([b[0] for b in bounds], [b[1] for b in bounds], size=(count, 2))
        area = (bounds[0][1] - bounds[0][0]) * (bounds[1][1] - bounds[1][0])
        total = 0.0
        for x in pts:
            total += _slice_or_zero(body, split, x, u)
        return total / count * area
    xs0, ws0 = gauss_legendre(rule.nodes_per_axis, *bounds[0])
    xs1, ws1 = gauss_legendre(rule.nodes_per_axis, *bounds[1])
    total = 0.0
    for x0, w0 in zip(xs0, ws0):
        row = np.array([_slice_or_zero(body, split, np.array([x0, x1]), u) for x1 in xs1])
        total += w0 * _integrate_nodes(row, ws1)
    return total


def _slice_or_zero(body, split, x, u) -> float:
    # nodes outside pi(K) contribute nothing (the integrand carries the
    # indicator of the projected body in the bounding-box formulation)
    try:
        return slice_support(body, split, SliceQuery(np.asarray(x, dtype=float), u))
    except EmptySliceError:
        return 0.0


def fiber_body_sampled(body: Body, split: ProjectionSplit, directions,
                       rule: QuadratureRule = QuadratureRule()) -> SampledSupport:
    """Fiber support on a direction set; deterministic given the rule."""
    dirs = np.asarray(directions, dtype=float).reshape(-1, split.m)
    vals = np.array([fiber_support_numeric(body, split, d, rule) for d in dirs])
    meta = {
        "method": "slicer",
        "nodes": rule.nodes_per_axis,
        "kind": rule.kind,
        "shrink": rule.shrink,
        "seed": rule.seed,
    }
    return SampledSupport(split.m, dirs, vals, None, meta)


def face_fiber_support(body: Body, split: ProjectionSplit, u, v,
                       rule: QuadratureRule = QuadratureRule()) -> float:
    """Support of the fiber body's face in direction u, evaluated at v.

    Integrates the slice-face support D+ h_{K_x}(u; v) over pi(K); each slice
    face support is a one-sided derivative of the slice support in its
    W-variable.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if not np.any(u):
        raise ValidationError("face direction u must be nonzero")
    if split.n != 1:
        raise UnsupportedDimensionError("face integration implemented for n = 1")
    nodes = _quad_nodes_1d(body, split, rule)
    if nodes is None:
        return 0.0
    xs, ws = nodes
    vals = np.empty_like(xs)
    for i, xv in enumerate(xs):
        def h_slice(w):
            return slice_support(body, split, SliceQuery(np.array([xv]), np.asarray(w)))

        vals[i] = _directional_derivative(h_slice, u, v)
    return _integrate_nodes(vals, ws)


@dataclass(frozen=True)
class StrictnessVerdict:
    strict: bool
    face_width: float


def strict_convexity_direction(h_evaluator, u, w_samples: int = 16,
                               tol: float = 1e-3) -> StrictnessVerdict:
    """Does a support function describe a body strictly convex in direction u?

    Measures the face width max_w [D+ h(u; w) + D+ h(u; -w)] over sampled w;
    the verdict is strict iff the width stays below tol.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if not np.any(u):
        raise ValidationError("direction must be nonzero")
    width = 0.0
    for w in sphere_sample(u.size, w_samples, "uniform-grid"):
        d_plus = _directional_derivative(h_evaluator, u, w)
        d_minus = _directional_derivative(h_evaluator, u, -w)
        width = max(width, d_plus + d_minus)
    return StrictnessVerdict(strict=width < tol, face_width=width)


def fiber_strict_convexity(body: Body, split: ProjectionSplit, u,
                           x_samples: int = 50, w_samples: int = 8,
                           tol: float = 1e-3,
                           shrink: float = DEFAULT_SHRINK) -> float:
    """Fraction of sampled slices that are strictly convex in direction u.

    The fiber body is strictly convex in direction u exactly when almost all
    slices are, so this fraction is the natural numeric surrogate.
    """
    if split.n != 1:
        raise UnsupportedDimensionError("slice sampling implemented for n = 1")
    lo, hi = _domain_1d(body, split)
    if hi - lo < 1e-12:
        return 1.0
    c, r = 0.5 * (hi + lo), 0.5 * (hi - lo) * shrink
    xs = np.linspace(c - r, c + r, x_samples)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    strict_count = 0
    for xv in xs:
        def h_slice(w):
            return slice_support(body, split, SliceQuery(np.array([xv]), np.asarray(w)))

        if strict_convexity_direction(h_slice, u, w_samples, tol).strict:
            strict_count += 1
    return strict_count / len(xs)
