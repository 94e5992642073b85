"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative numerical routine fails to converge."""


class CircuitTooLargeError(RuntimeError):
    """Raised when an exact enumeration would exceed the size guard.

    Callers hitting this should switch to the sampling-based extraction.
    """


class UnsupportedEncodingError(RuntimeError):
    """Raised for operations defined only on the equispaced integer spectrum."""
