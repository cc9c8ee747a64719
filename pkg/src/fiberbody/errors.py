"""Exception and warning types shared across the package."""


class FiberBodyError(Exception):
    """Base class for all package errors."""


class DimensionError(FiberBodyError):
    """A vector or matrix has the wrong ambient dimension."""


class ValidationError(FiberBodyError):
    """A structural invariant of a body or model is violated."""


class ParseError(FiberBodyError):
    """A body description file is malformed."""


class EmptySliceError(FiberBodyError):
    """Requested slice point lies outside (or on the boundary of) the projected body."""


class UnsupportedDimensionError(FiberBodyError):
    """The numeric engine does not support this projection dimension."""


class NotCurvedError(FiberBodyError):
    """Body failed the positive-curvature validation required by the curved engine."""


class ArityError(FiberBodyError):
    """Wrong number of arguments for a multilinear map."""


class DomainError(FiberBodyError):
    """Scalar argument outside the mathematical domain of a formula."""


class InvalidDiscotopeError(ValidationError):
    """Discotope axes are parallel or otherwise inadmissible."""


class InvalidPolytopeError(ValidationError):
    """Vertex and facet descriptions of a polytope are inconsistent."""


class UnboundedRayError(FiberBodyError):
    """No boundary crossing found along a ray; the facet system is inadmissible."""


class MethodError(FiberBodyError):
    """Requested fiber-body method is not applicable to the body class."""


class InputError(FiberBodyError):
    """Inconsistent user-supplied data (e.g. mismatched direction sets)."""


class GeometryError(FiberBodyError):
    """Geometric reconstruction failed (e.g. infeasible half-plane data)."""


class ConvergenceWarning(UserWarning):
    """Iteration budget exhausted before the requested tolerance was met."""


class IllConditionedWarning(UserWarning):
    """Numeric signal (e.g. Jacobian sign change) suggests an ill-conditioned integral."""
