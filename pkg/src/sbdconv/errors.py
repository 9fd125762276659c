"""Exception types raised by sbdconv."""


class DomainError(ValueError):
    """Argument outside the domain of a function (e.g. log at r <= 0)."""


class DegenerateBasisError(ValueError):
    """Two basis frequencies coincide, so the Gram closed form breaks down."""


class KernelValidationError(ValueError):
    """A user kernel failed its value/derivative consistency check."""


class BudgetError(ValueError):
    """Requested error budget is smaller than what the inputs already spend."""


class ConvergenceError(RuntimeError):
    """Adaptive order search ran out of room before meeting the tolerance."""

    def __init__(self, message, best_error=float("nan"), best_order=None):
        super().__init__(message)
        self.best_error = best_error
        self.best_order = best_order


class ConditioningError(RuntimeError):
    """Gram matrix lost positive definiteness in floating point."""
