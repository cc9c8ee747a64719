"""Support-function convex bodies and their fiber bodies.

A fiber body is the average of the slices of a convex body under an
orthogonal projection.  The package represents bodies as immutable
description trees evaluated through their support functions and computes
fiber bodies by several independent routes (slice integration, a
gradient-Jacobian integral for curved bodies, exact zonotope combinatorics,
Monte Carlo estimators for zonoids, and shadow volumes) that cross-validate
each other.
"""

__version__ = "0.1.0"

from .bodies import (  # noqa: F401
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
from .routes import compute_fiber  # noqa: F401
