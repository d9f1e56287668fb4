"""Exception hierarchy for divlab."""


class DivlabError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(DivlabError, ValueError):
    pass


class DimensionError(DivlabError, ValueError):
    pass


class DomainError(DivlabError, ValueError):
    pass


class NotPositive(DivlabError, ValueError):
    pass


class NotFaithful(DivlabError, ValueError):
    pass


class InvalidPartition(DivlabError, ValueError):
    pass


class InvalidProjection(DivlabError, ValueError):
    pass


class UnsupportedFunction(DivlabError, ValueError):
    pass


class QuadratureError(DivlabError, ArithmeticError):
    pass


class OptimizationError(DivlabError, ArithmeticError):
    """Raised when an iterative solver stops short of its tolerance.

    The final residual is kept on the instance for diagnostics.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DivergenceOverflow(DivlabError, ArithmeticError):
    """A finite sum overflowed; distinct from a mathematically infinite result."""
