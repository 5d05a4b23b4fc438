"""Exception types raised across the package."""


class TwdetError(Exception):
    """Base class for all package errors."""


class DomainError(TwdetError, ValueError):
    """Argument outside the mathematical domain of a function (e.g. non-finite)."""


class ParameterError(TwdetError, ValueError):
    """Invalid configuration or parameter value."""


class NumericalError(TwdetError, ArithmeticError):
    """A numerical procedure failed (non-convergence, breakdown)."""


class NumericalDegeneracyError(NumericalError):
    """A factorization hit an exactly or numerically singular matrix."""


class InstabilityError(NumericalError):
    """An ODE integration left the region where the solution is trustworthy.

    ``s_reached`` records the last abscissa at which the state was finite.
    """

    def __init__(self, message, s_reached=None):
        super().__init__(message)
        self.s_reached = s_reached


class WindowTooSmallError(TwdetError, RuntimeError):
    """A lattice simulation touched the edge of its finite window."""
