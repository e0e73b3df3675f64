"""Exception hierarchy shared across the package."""


class SchurLabError(Exception):
    """Base class for all package errors."""


class ValidationError(SchurLabError):
    """Bad arguments, malformed configs, mismatched lattices."""


class LatticeMismatchError(ValidationError):
    """Two objects were expected to share a lattice but do not."""


class NumericalFailureError(SchurLabError):
    """A numerical routine (SVD, projection loop) failed to converge."""
