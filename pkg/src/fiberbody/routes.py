"""Fiber-body route dispatch: one entry point, several independent engines.

Methods: 'slicer' (slice integration, any body), 'curved' (gradient-Jacobian
integral, positively curved bodies), 'zonoid-exact' (zonotopes),
'zonoid-mc' (Monte Carlo over a Vitale model; zonotopes and discotopes),
'closed-form' (elliptope and the axis-aligned discotope), and 'auto'.
"""

from __future__ import annotations

import numpy as np

from .bodies import (
    Ball,
    Body,
    Discotope,
    Elliptope,
    ProjectionSplit,
    SampledSupport,
    Schneider,
    Zonotope,
    sphere_sample,
)
from .curved import CurvedIntegrand, curvature_validate, curved_fiber_support
from .errors import MethodError
from .inflation import elliptope_fiber_closed
from .slicer import QuadratureRule, fiber_body_sampled
from .zonoids import (
    dice_fiber_support,
    discotope_model,
    fiber_zonoid_mc,
    zonotope_model,
    zonotope_support,
    fiber_zonotope,
)

METHODS = ("auto", "slicer", "curved", "zonoid-exact", "zonoid-mc", "closed-form")


def _structurally_flat(body: Body) -> bool:
    # bodies with flat boundary pieces are never curved even when the flat
    # directions form a measure-zero set the sampled validator cannot hit
    from .bodies import InflatedPolytope, Polytope

    return isinstance(body, (Zonotope, Polytope, Discotope, InflatedPolytope, Elliptope))


def applicable_methods(body: Body, split: ProjectionSplit) -> list[str]:
    out = []
    if split.n in (1, 2):
        out.append("slicer")
    if isinstance(body, Zonotope):
        out += ["zonoid-exact", "zonoid-mc"]
    if isinstance(body, Discotope):
        out.append("zonoid-mc")
    if not _structurally_flat(body) and curvature_validate(body).curved:
        out.append("curved")
    if _closed_form_kind(body, split):
        out.append("closed-form")
    return out


def resolve_auto(body: Body, split: ProjectionSplit) -> str:
    if isinstance(body, Zonotope):
        return "zonoid-exact"
    if isinstance(body, Discotope):
        return "zonoid-mc"
    if isinstance(body, (Ball, Schneider)):
        return "curved"
    if not _structurally_flat(body) and curvature_validate(body).curved:
        return "curved"
    return "slicer"


def _closed_form_kind(body: Body, split: ProjectionSplit) -> str | None:
    if not (split.n == 1 and split.is_coordinate()):
        return None
    if isinstance(body, Elliptope):
        return "elliptope"
    if isinstance(body, Discotope) and body.axes.shape == (3, 3):
        perm = np.abs(body.axes)
        if np.allclose(np.sort(np.argmax(perm, axis=1)), [0, 1, 2]) and np.allclose(
            np.linalg.norm(body.axes, axis=1), 1.0
        ) and np.allclose(perm.max(axis=1), 1.0):
            return "dice"
    return None


def compute_fiber(body: Body, split: ProjectionSplit, directions=None, *,
                  method: str = "auto", nodes: int = 64,
                  samples: int = 1_000_000, seed: int = 0,
                  n_directions: int = 32) -> SampledSupport:
    """Fiber-body support values on unit directions of W, by the chosen route.

    Raises MethodError (listing the applicable routes) when the requested
    method does not fit the body class.
    """
    if method not in METHODS:
        raise MethodError(f"unknown method {method!r}; choose from {METHODS}")
    if directions is None:
        directions = sphere_sample(split.m, n_directions, "uniform-grid")
    dirs = np.asarray(directions, dtype=float).reshape(-1, split.m)

    if method == "auto":
        method = resolve_auto(body, split)

    if method == "slicer":
        rule = QuadratureRule(
            kind="gauss-legendre" if split.n == 1 else "tensor-gauss",
            nodes_per_axis=nodes, seed=seed,
        )
        return fiber_body_sampled(body, split, dirs, rule)

    if method == "curved":
        report = curvature_validate(body)
        if _structurally_flat(body) or not report.curved:
            raise MethodError(
                "body is not curved (min tangential eigenvalue "
                f"{report.min_eigenvalue:.2e}); applicable: {applicable_methods(body, split)}"
            )
        vals = []
        for d in dirs:
            norm = float(np.linalg.norm(d))
            ci = CurvedIntegrand(body, split, d / norm, validate=False)
            # support functions are degree-1 homogeneous in the direction
            vals.append(norm * curved_fiber_support(ci, max(nodes, 120)))
        return SampledSupport(split.m, dirs, np.array(vals), None,
                              {"method": "curved", "nodes": max(nodes, 120)})

    if method == "zonoid-exact":
        if not isinstance(body, Zonotope):
            raise MethodError(
                f"zonoid-exact needs a zonotope; applicable: {applicable_methods(body, split)}"
            )
        gens = fiber_zonotope(body.generators, split)
        vals = np.array([zonotope_support(gens, d) for d in dirs])
        return SampledSupport(split.m, dirs, vals, None,
                              {"method": "zonoid-exact", "fiber_generators": len(gens)})

    if method == "zonoid-mc":
        if isinstance(body, Zonotope):
            model = zonotope_model(body.generators)
        elif isinstance(body, Discotope):
            model = discotope_model(body.axes)
        else:
            raise MethodError(
                "zonoid-mc needs a zonotope or discotope; applicable: "
                f"{applicable_methods(body, split)}"
            )
        children = np.random.SeedSequence(seed).spawn(len(dirs))
        vals, errs = [], []
        for d, child in zip(dirs, children):
            est = fiber_zonoid_mc(model, split, d, samples, child.entropy % 2**32)
            vals.append(est.value)
            errs.append(est.stderr)
        return SampledSupport(split.m, dirs, np.array(vals), np.array(errs),
                              {"method": "zonoid-mc", "samples": samples, "seed": seed})

    kind = _closed_form_kind(body, split)
    if kind is None:
        raise MethodError(
            "no closed form for this body/split; applicable: "
            f"{applicable_methods(body, split)}"
        )
    if kind == "elliptope":
        vals = np.array([elliptope_fiber_closed(d) for d in dirs])
    else:
        # route-consistent closed form (quadruple of the commonly quoted one)
        vals = np.array([dice_fiber_support(d) for d in dirs])
    return SampledSupport(split.m, dirs, vals, None, {"method": "closed-form", "kind": kind})
