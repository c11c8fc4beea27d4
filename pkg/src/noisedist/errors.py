"""Exception types shared across the package."""


class NoiseDistError(Exception):
    """Base class for all package errors."""


class ValidationError(NoiseDistError, ValueError):
    """An input violates a structural invariant (non-unit axis, bad table, ...)."""


class DomainError(NoiseDistError, ValueError):
    """A numerical argument is outside the mathematical domain of a function."""


class EstimationError(NoiseDistError, RuntimeError):
    """A probability estimate is undefined for the given count data."""
