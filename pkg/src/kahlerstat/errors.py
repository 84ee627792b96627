"""Exception hierarchy shared by all modules."""


class KahlerStatError(Exception):
    """Base class for errors raised by this package."""


class DomainError(KahlerStatError, ValueError):
    """Input outside the domain where a quantity is defined."""


class SaturationError(DomainError):
    """Phase space is over-filled: the available volume would be negative.

    ``value`` carries the physically meaningful result (zero volume).
    """

    def __init__(self, message, value=0.0):
        super().__init__(message)
        self.value = value


class IncompressibilityError(SaturationError):
    """Density at or beyond the close-packing value ``rho = 1/alpha``."""

    def __init__(self, message, value=float("inf")):
        super().__init__(message, value)


class ResourceError(KahlerStatError, RuntimeError):
    """A computation would exceed its configured size or term budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConvergenceError(KahlerStatError, RuntimeError):
    """An iterative procedure failed to meet its tolerance.

    ``history`` holds the last refinement values or residuals.
    """

    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = tuple(history)


class PrecisionError(ConvergenceError):
    """Monte Carlo standard error above budget after the sample cap."""


class FitError(ConvergenceError):
    """Least-squares fit residual above threshold."""

    def __init__(self, message, residual, history=()):
        super().__init__(message, history)
        self.residual = residual
