"""Exception types shared across the package."""


class FogmError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FogmError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NonFiniteValue(FogmError, ArithmeticError):
    """A value that must be finite is NaN or infinite."""


class NonEmptyRequired(FogmError, ValueError):
    """A collection argument must contain at least one element."""


class SingularStep(FogmError, ArithmeticError):
    """The step multiplier is unbounded (zero increment with gradient order above one)."""


class MissingMetadata(FogmError, ValueError):
    """The objective lacks metadata required by the requested operation."""


class BracketingFailed(FogmError, RuntimeError):
    """Bisection endpoints do not bracket a behavior transition."""


class DegenerateSample(FogmError, ValueError):
    """Sampled data carries no usable variation."""
