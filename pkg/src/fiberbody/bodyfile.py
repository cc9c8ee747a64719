"""Body description files: JSON with body{type, ...} and split{n, m, ...} keys.

Unknown keys are rejected so typos fail loudly; structural invariants are
checked by the body constructors and reported as ValidationError.
"""

from __future__ import annotations

import json

import numpy as np

from .bodies import (
    Ball,
    Body,
    Disc,
    Discotope,
    Elliptope,
    InflatedPolytope,
    LinearImage,
    MinkowskiSum,
    Polytope,
    ProjectionSplit,
    Scaled,
    Schneider,
    Zonotope,
)
from .errors import ParseError, ValidationError
from .inflation import FacetSystem

_BODY_KEYS = {
    "polytope": {"vertices"},
    "zonotope": {"generators"},
    "disc": {"axis"},
    "discotope": {"axes"},
    "schneider": {"alpha"},
    "elliptope": set(),
    "inflated_polytope": {"facets", "order"},
    "ball": {"radius", "dim"},
    "sum": {"bodies"},
    "scaled": {"factor", "body"},
    "linear_image": {"matrix", "body"},
}


def body_from_dict(spec: dict) -> Body:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ParseError("body entry must be an object with a 'type' key")
    kind = spec["type"]
    if kind not in _BODY_KEYS:
        raise ParseError(f"unknown body type {kind!r}; known: {sorted(_BODY_KEYS)}")
    extra = set(spec) - _BODY_KEYS[kind] - {"type"}
    if extra:
        raise ParseError(f"unknown fields {sorted(extra)} for body type {kind!r}")
    try:
        if kind == "polytope":
            return Polytope(np.asarray(spec["vertices"], dtype=float))
        if kind == "zonotope":
            return Zonotope(np.asarray(spec["generators"], dtype=float))
        if kind == "disc":
            return Disc(np.asarray(spec["axis"], dtype=float))
        if kind == "discotope":
            return Discotope(np.asarray(spec["axes"], dtype=float))
        if kind == "schneider":
            return Schneider(float(spec["alpha"]))
        if kind == "elliptope":
            return Elliptope()
        if kind == "inflated_polytope":
            facets = spec["facets"]
            normals = [f["normal"] for f in facets]
            offsets = [f["offset"] for f in facets]
            return InflatedPolytope(FacetSystem(normals, offsets, int(spec.get("order", 1))))
        if kind == "ball":
            return Ball(float(spec["radius"]), int(spec.get("dim", 3)))
        if kind == "sum":
            return MinkowskiSum(tuple(body_from_dict(b) for b in spec["bodies"]))
        if kind == "scaled":
            return Scaled(float(spec["factor"]), body_from_dict(spec["body"]))
        if kind == "linear_image":
            return LinearImage(np.asarray(spec["matrix"], dtype=float),
                               body_from_dict(spec["body"]))
    except KeyError as exc:
        raise ParseError(f"body type {kind!r} is missing field {exc}") from exc
    raise AssertionError(kind)


def split_from_dict(spec: dict | None, body_dim: int) -> ProjectionSplit:
    if spec is None:
        # default: project onto the first coordinate
        return ProjectionSplit.coordinate(1, body_dim - 1)
    extra = set(spec) - {"n", "m", "basis_V", "basis_W"}
    if extra:
        raise ParseError(f"unknown split fields {sorted(extra)}")
    try:
        n, m = int(spec["n"]), int(spec["m"])
    except KeyError as exc:
        raise ParseError(f"split is missing field {exc}") from exc
    if n + m != body_dim:
        raise ValidationError(f"split {n}+{m} does not match body dimension {body_dim}")
    if "basis_V" in spec or "basis_W" in spec:
        if not ("basis_V" in spec and "basis_W" in spec):
            raise ParseError("basis_V and basis_W must be given together")
        return ProjectionSplit(n, m, np.asarray(spec["basis_V"], dtype=float),
                               np.asarray(spec["basis_W"], dtype=float))
    return ProjectionSplit.coordinate(n, m)


def parse_body_dict(spec: dict) -> tuple[Body, ProjectionSplit]:
    if not isinstance(spec, dict):
        raise ParseError("top-level value must be an object")
    extra = set(spec) - {"body", "split"}
    if extra:
        raise ParseError(f"unknown top-level fields {sorted(extra)}")
    if "body" not in spec:
        raise ParseError("missing 'body' key")
    body = body_from_dict(spec["body"])
    split = split_from_dict(spec.get("split"), body.dim)
    return body, split


def parse_body_spec(path) -> tuple[Body, ProjectionSplit]:
    """Read and validate a body description file; returns (body, split)."""
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return parse_body_dict(spec)
