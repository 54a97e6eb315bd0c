"""Root finding for functions known only through their derivatives and one anchor value."""

from .errors import (
    DegenerateStepError,
    DivergenceError,
    InchrootError,
    NegativeDiscriminantError,
    NonFiniteError,
    NonMonotoneError,
    OrderCapError,
    SingularMatrixError,
    TooFewSamplesError,
    ZeroDerivativeError,
)
from .fixtures import ProblemFixture, get_fixture
from .local import branch_select_quadratic, local_inversion, local_inversion_quadratic
from .multidim import GradientTarget, hybrid_nd, linear_solve, local_inversion_nd
from .newton import NewtonConfig, approximate_newton, hybrid_local_newton, solve_explicit_integrand
from .quadrature import (
    bernoulli_numbers,
    em_integral_even,
    em_integral_uneven,
    faa_di_bruno_G_derivative,
    gauss_legendre_nodes,
    trapezoid_integral,
)
from .series import compose_series, enumerate_partitions, faa_di_bruno, invert_series
from .spline import SplineInterpolant, fit_spline
from .target import DifferentiableTarget, Method, RootEstimate, TraceStep

__version__ = "0.1.0"
