"""Exception types raised by the library."""


class ValidationError(ValueError):
    """Input does not describe a physical object (state, measurement, CM)."""


class UnsupportedMeasureError(ValueError):
    """The requested measure is not defined for the given state."""


class SingularConfigurationError(ArithmeticError):
    """A formula would divide by a vanishing area."""


class UnphysicalCovarianceError(ValidationError):
    """Covariance (sub)matrix violates the uncertainty relation."""


class InvalidTriangleError(ValueError):
    """Side lengths violate the triangle relation beyond tolerance."""

    def __init__(self, message, branches=None):
        super().__init__(message)
        self.branches = branches or []


class UnsupportedStateError(ValueError):
    """State lies outside the supported (desk-scale) range."""


class ConstructionFailedError(RuntimeError):
    pass


class SearchFailedError(RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
