"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: PreconditionError -> 2,
NumericalError (and subclasses) -> 3, DomainError -> 4.
"""


class PreconditionError(ValueError):
    """An operation was called with arguments violating its preconditions.

    The message always names the operation and the violated condition.
    """


class NumericalError(RuntimeError):
    """A numerical procedure failed (non-hyperbolic input, guard violation...)."""


class NotHyperbolicError(NumericalError):
    """Spectral splitting failed: some eigenvalue is too close to the imaginary axis."""


class SingularMatrixError(NumericalError):
    """A linear solve hit a pivot below tolerance."""

    def __init__(self, message, pivot_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index


class StabilityGuardError(NumericalError):
    """Integrator step size violates the stiffness guard and cannot be refined."""


class DomainError(ValueError):
    """A signal or solution was evaluated outside its covered time range."""
