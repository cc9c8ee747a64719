"""Dual reconstruction of planar bodies from sampled support values.

The body circumscribed by the sampled halfplanes {y : <u_k, y> <= h_k} is
recovered as the convex hull of all pairwise line intersections that satisfy
every constraint; with directions spread over the circle this is the sampled
body up to sample resolution.
"""

from __future__ import annotations

import numpy as np

from .bodies import SampledSupport
from .errors import GeometryError, InputError


def polygon_from_support(sampled: SampledSupport, tol: float = 1e-9) -> np.ndarray:
    """Vertices (counterclockwise) of the halfplane intersection of 2-d support data.

    Degenerate bodies (zero width or a single point) come back as 2 or 1
    rows.  Raises GeometryError when the halfplanes are infeasible, i.e. the
    values are not support data.
    """
    if sampled.dim != 2:
        raise InputError("polygon reconstruction needs 2-dimensional support data")
    U = sampled.directions
    h = sampled.values
    if len(h) < 3:
        raise InputError("need at least 3 directions spanning the circle")
    order = np.argsort(np.arctan2(U[:, 1], U[:, 0]))
    U, h = U[order], h[order]
    k = len(h)
    scale = 1.0 + float(np.max(np.abs(h)))

    pts = []
    for i in range(k):
        for j in range(i + 1, k):
            A = np.array([U[i], U[j]])
            det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
            if abs(det) < 1e-13:
                continue
            p = np.linalg.solve(A, np.array([h[i], h[j]]))
            pts.append(p)
    if not pts:
        raise GeometryError("no candidate vertices: directions are degenerate")
    pts = np.array(pts)
    feasible = pts[np.all(pts @ U.T <= h[None, :] + tol * scale, axis=1)]
    if len(feasible) == 0:
        raise GeometryError("halfplane set is infeasible: values are not support data")
    return _hull(feasible, tol * scale)


def _hull(points: np.ndarray, tol: float) -> np.ndarray:
    """Monotone-chain convex hull; collinear interior points dropped."""
    pts = np.unique(np.round(points / max(tol, 1e-12)) * max(tol, 1e-12), axis=0)
    if len(pts) == 1:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= tol:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) == 0:
        return pts[:1]
    if len(hull) <= 2:
        # segment: keep the two extreme points
        return np.unique(hull, axis=0)
    return hull


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hausdorff_distance(a: SampledSupport, b: SampledSupport) -> float:
    """Sampled Hausdorff distance: max |h_a - h_b| over the shared directions.

    For convex bodies the true distance is the sup-norm of the support
    difference over the whole sphere, so this is a lower bound limited by
    sample resolution.  Requires identical direction lists.
    """
    if a.dim != b.dim or len(a) != len(b):
        raise InputError("support samples differ in dimension or length")
    if not np.allclose(a.directions, b.directions, atol=1e-12):
        raise InputError("direction sets differ; distances need a common sample")
    if len(a) == 0:
        return 0.0
    return float(np.max(np.abs(a.values - b.values)))
