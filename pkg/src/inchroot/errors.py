"""Exception types raised by the solvers.

Arithmetic failures of a solve derive from ``ArithmeticError``; bad arguments
derive from ``ValueError``. Everything also derives from ``InchrootError`` so
callers sweeping many problems can catch one type.
"""


class InchrootError(Exception):
    """Base class for every error raised by this package."""


class ZeroDerivativeError(InchrootError, ArithmeticError):
    """The leading expansion coefficient vanished (stationary point)."""


class NonFiniteError(InchrootError, ArithmeticError):
    """A sample, coefficient or iterate left the finite range."""


class NegativeDiscriminantError(InchrootError, ArithmeticError):
    """The quadratic model has no real step of the requested size."""


class DegenerateStepError(InchrootError, ArithmeticError):
    """Both the first and second expansion coefficients vanished."""


class SingularMatrixError(InchrootError, ArithmeticError):
    """A linear system is singular or too ill-conditioned to solve."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class DivergenceError(InchrootError, ArithmeticError):
    """Newton iterates ran away from the anchor instead of settling.

    Attributes:
        iterates: every iterate visited, starting with the anchor.
        growth_factor: geometric-mean ratio of successive hop lengths.
    """

    def __init__(self, message, iterates, growth_factor):
        super().__init__(message)
        self.iterates = list(iterates)
        self.growth_factor = growth_factor


class OrderCapError(InchrootError, ValueError):
    """A requested expansion order exceeds the configured cap."""


class TooFewSamplesError(InchrootError, ValueError):
    """Not enough samples to fit the requested interpolant."""


class NonMonotoneError(InchrootError, ValueError):
    """Sample abscissae are not strictly monotone."""
