"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(RuntimeError):
    """An iterative method failed to meet its tolerance."""


class NoRootError(ConvergenceError):
    """The defining equation has no root on the admissible range."""


class PrecisionLossError(ConvergenceError):
    """Cancellation left too few significant digits in a result."""
