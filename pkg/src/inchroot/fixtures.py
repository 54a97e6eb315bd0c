"""Worked example problems with analytic derivatives and reference roots.

Each :class:`ProblemFixture` exposes a solver-facing target (derivatives and
anchor only) and, separately, a ``reference_value`` callable giving ``y``
itself. Solvers never see ``reference_value``; it exists so tests can check
residuals by an independent route.

Fixtures are looked up by name with :func:`get_fixture`. Parameterized
families take a ``name:param`` form, e.g. ``curvature:0.4`` or
``smoothstep:10``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .multidim import GradientTarget
from .target import DifferentiableTarget

QUINTIC_ROOT = 3.0 ** 0.2
# Second coordinate as commonly quoted (-6.25699505) has transposed digits:
# it violates 3 x1 + 2 x2 + 9 = 0.
COST2D_ROOT = (1.3517269831373791, -6.5275904747060686)
COST2D_ANCHOR = (1.0, 0.0)


@dataclass(frozen=True)
class ProblemFixture:
    name: str
    target: DifferentiableTarget | GradientTarget
    oracle_root: Any
    oracle_provenance: str
    reference_value: Callable | None = field(default=None, repr=False)
    dydx_of_y: Callable | None = field(default=None, repr=False)
    description: str = ""

    @property
    def is_gradient(self) -> bool:
        return isinstance(self.target, GradientTarget)


def quintic_fixture() -> ProblemFixture:
    """``y = x^5 - 3`` anchored at ``(2, 29)``, four derivatives."""
    derivatives = (
        lambda x: 5 * x**4,
        lambda x: 20 * x**3,
        lambda x: 60 * x**2,
        lambda x: 120 * x,
    )
    return ProblemFixture(
        "quintic",
        DifferentiableTarget(derivatives, 2.0, 29.0),
        QUINTIC_ROOT,
        "closed-form 3**(1/5)",
        reference_value=lambda x: x**5 - 3,
        description="y = x^5 - 3",
    )


def cos_fixture() -> ProblemFixture:
    """``y = cos x`` anchored at its maximum ``(0, 1)``, where ``y' = 0``."""
    derivatives = (
        lambda x: -math.sin(x),
        lambda x: -math.cos(x),
        lambda x: math.sin(x),
        lambda x: math.cos(x),
    )
    return ProblemFixture(
        "cos",
        DifferentiableTarget(derivatives, 0.0, 1.0),
        math.pi / 2,
        "closed-form pi/2",
        reference_value=math.cos,
        description="y = cos x from the stationary point x = 0",
    )


def curvature_fixture(gamma: float = 0.4, anchor: float = 1.0) -> ProblemFixture:
    """``y = |x|^gamma``, root 0.

    At ``x = 0`` the first derivative is reported as ``inf`` when
    ``gamma < 1`` (and the second when ``gamma < 2``).
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")

    def d1(x):
        if x == 0:
            return math.inf if gamma < 1 else (gamma if gamma == 1 else 0.0)
        return gamma * math.copysign(abs(x) ** (gamma - 1), x)

    def d2(x):
        if x == 0:
            return math.inf if gamma < 2 else (2.0 if gamma == 2 else 0.0)
        return gamma * (gamma - 1) * abs(x) ** (gamma - 2)

    return ProblemFixture(
        f"curvature:{gamma:g}",
        DifferentiableTarget((d1, d2), anchor, abs(anchor) ** gamma),
        0.0,
        "closed-form 0",
        reference_value=lambda x: abs(x) ** gamma,
        description=f"y = |x|^{gamma:g}",
    )


def smoothstep_constant(n: int) -> float:
    """``2 Gamma(n + 3/2) / (sqrt(pi) Gamma(n + 1))``, so that ``r_n(1) = 1``."""
    return 2.0 / math.sqrt(math.pi) * math.exp(math.lgamma(n + 1.5) - math.lgamma(n + 1))


def smoothstep_r_derivatives(n: int, x: float, order: int = 1) -> float:
    """``order``-th derivative of ``r_n(x) = C_n integral_0^x (1 - u^2)^n du``.

    Orders 2-4 are the Faa di Bruno expansion of ``C_n (1 - x^2)^n``.
    """
    from .series import faa_di_bruno

    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a non-negative integer, got {n}")
    if not -1 < x < 1:
        raise ValueError(f"x must lie in (-1, 1), got {x}")
    if not 1 <= order <= 4:
        raise ValueError(f"order must be 1..4, got {order}")
    u = 1.0 - x * x
    k = order - 1
    # f(u) = u^n: falling factorials times u^(n-i)
    outer = []
    fall = 1.0
    for i in range(k + 1):
        outer.append(fall * u ** (n - i) if fall else 0.0)
        fall *= n - i
    inner = [-2.0 * x, -2.0, 0.0, 0.0][:k]
    return smoothstep_constant(n) * faa_di_bruno(k, outer, inner)


def smoothstep_r(n: int, x: float) -> float:
    """Reference value ``r_n(x) = sign(x) I_{x^2}(1/2, n + 1)`` (regularized incomplete beta)."""
    from scipy.special import betainc

    return math.copysign(float(betainc(0.5, n + 1, x * x)), x)


def smoothstep_s(n: int, x: float) -> float:
    """Degree-``2n+1`` smoothstep on ``[0, 1]`` via ``s_n(x) = r_n(2x - 1) / 2 + 1/2``."""
    return 0.5 * smoothstep_r(n, 2 * x - 1) + 0.5


def smoothstep_fixture(n: int = 1, level: float = 0.9, orders: int = 2) -> ProblemFixture:
    """Find ``x`` with ``r_n(x) = level``: target ``r_n(x) - level`` anchored at ``(0, -level)``."""
    from scipy.special import betaincinv

    if not -1 < level < 1:
        raise ValueError(f"level must lie in (-1, 1), got {level}")
    derivatives = tuple(
        (lambda j: (lambda x: smoothstep_r_derivatives(n, x, j)))(j)
        for j in range(1, orders + 1)
    )
    root = math.copysign(math.sqrt(float(betaincinv(0.5, n + 1, abs(level)))), level)
    return ProblemFixture(
        f"smoothstep:{n}",
        DifferentiableTarget(derivatives, 0.0, -level),
        root,
        "closed-form inverse incomplete beta",
        reference_value=lambda x: smoothstep_r(n, x) - level,
        description=f"r_{n}(x) = {level:g}",
    )


def smoothstep_inverse(n: int, target_value: float, method: str = "newton", N: int = 1000,
                       m: int = 2, iterations: int = 10) -> float:
    """``x`` with ``r_n(x) = target_value``, found from derivatives of ``r_n`` only."""
    from .local import local_inversion
    from .newton import NewtonConfig, approximate_newton, hybrid_local_newton

    if not -1 < target_value < 1:
        raise ValueError(f"target_value must lie in (-1, 1), got {target_value}")
    target = smoothstep_fixture(n, target_value, orders=max(2, m)).target
    if method == "newton":
        est = approximate_newton(target, NewtonConfig(N=N, iterations=iterations, m=m))
    elif method == "hybrid":
        est = hybrid_local_newton(target, N, m)
    elif method == "local":
        est = local_inversion(target, N, m)
    else:
        raise ValueError(f"unknown method {method!r}")
    return est.root


def cost2d_gradient(x: np.ndarray) -> np.ndarray:
    x1, x2 = x
    return np.array([4 * x1**3 + 2 * x1 + 3 * x2 + 7, 3 * x1 + 2 * x2 + 9])


def cost2d_hessian(x: np.ndarray) -> np.ndarray:
    x1 = x[0]
    return np.array([[12 * x1**2 + 2, 3.0], [3.0, 2.0]])


def cost2d_value(x: np.ndarray) -> float:
    x1, x2 = x
    return x1**4 + x1**2 + 3 * x1 * x2 + x2**2 + 7 * x1 + 9 * x2


def cost2d_fixture(anchor=COST2D_ANCHOR) -> ProblemFixture:
    """Extremum of ``x1^4 + x1^2 + 3 x1 x2 + x2^2 + 7 x1 + 9 x2``.

    ``det H = 24 x1^2 - 5`` vanishes at ``|x1| = sqrt(5/24)``. From the origin
    the gradient-homotopy path folds back at ``x1 = -sqrt(5/24)`` before
    reaching the root, so the default anchor sits on the root's side of
    that line.
    """
    x0 = np.asarray(anchor, dtype=float)
    return ProblemFixture(
        "cost2d",
        GradientTarget(cost2d_gradient, cost2d_hessian, x0, cost2d_gradient(x0)),
        np.array(COST2D_ROOT),
        "classical Newton on the gradient, 30 digits",
        reference_value=cost2d_value,
        description="stationary point of a quartic cost in two variables",
    )


def arccos_fixture() -> ProblemFixture:
    """Explicit-slope form of ``cos``: ``y' = -sqrt(1 - y^2)`` from ``(0, 1/sqrt(2))``.

    ``x0 - integral_0^{y0} dy / y'`` is ``arcsin(1/sqrt 2) = pi/4``.
    """
    cos = cos_fixture()
    return ProblemFixture(
        "arccos",
        cos.target.with_anchor(0.0, 1 / math.sqrt(2)),
        math.pi / 4,
        "closed-form pi/4",
        dydx_of_y=lambda y: -math.sqrt(1 - y * y),
        description="integral of 1/sqrt(1 - y^2) over (0, 1/sqrt 2)",
    )


FIXTURES: dict[str, Callable[..., ProblemFixture]] = {
    "quintic": quintic_fixture,
    "cos": cos_fixture,
    "curvature": lambda p=None: curvature_fixture(0.4 if p is None else float(p)),
    "smoothstep": lambda p=None: smoothstep_fixture(1 if p is None else int(p)),
    "cost2d": cost2d_fixture,
    "arccos": arccos_fixture,
}


def get_fixture(name: str) -> ProblemFixture:
    """Look up a fixture by ``name`` or ``name:param``.

    Raises:
        KeyError: unknown fixture name.
    """
    base, _, param = name.partition(":")
    if base not in FIXTURES:
        raise KeyError(f"unknown problem {name!r}; known: {', '.join(sorted(FIXTURES))}")
    factory = FIXTURES[base]
    return factory(param) if param else factory()
