"""Exception hierarchy shared by all modules.

Messages are prefixed with the name of the module that raised them so the
CLI can report where a failure happened.
"""


class VortexError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(VortexError, ValueError):
    """Bad input: violated precondition, malformed spec or file."""


class CriticalKappaError(ValidationError):
    """The spectral parameter sits on (or next to) a critical value k_j."""


class NumericalError(VortexError, ArithmeticError):
    """A numerical procedure failed its own accuracy certificate."""


class RootFindingError(NumericalError):
    """Root residuals above tolerance after polishing."""


class CollisionError(NumericalError):
    """Two vortices came too close during time integration."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
