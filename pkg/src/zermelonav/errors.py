"""Exception taxonomy for navigation-data and metric evaluation failures."""


class ZermeloError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ZermeloError):
    """A point lies outside the declared rectangle of validity."""


class ConvexityError(ZermeloError):
    """The mild-flow condition |W|_h < speed fails (or h is not positive
    definite) at an evaluation point, so the travel-time norm is undefined."""


class DegenerateVectorError(ZermeloError):
    """A nonzero tangent vector is required (the squared norm is not twice
    differentiable at the origin of a tangent plane)."""


class DegeneracyError(ZermeloError):
    """The fundamental form of the squared norm is numerically singular, which
    happens on approach to the strong-convexity boundary."""


class ReconstructionError(ZermeloError):
    """A norm decomposition does not come from any admissible navigation data
    (no positive definite solution exists)."""


class ExpressionError(ZermeloError):
    """A field expression is outside the supported closed-form vocabulary."""


class ConfigError(ZermeloError):
    """A problem configuration document is malformed.

    ``line`` carries the 1-based line number when known.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
