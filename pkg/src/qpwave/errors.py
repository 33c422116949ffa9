"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(ValueError):
    """Inputs are structurally wrong (mismatched weights, wrong parity, ...)."""


class ConvergenceError(RuntimeError):
    """An iteration failed to converge within its allowed budget."""
