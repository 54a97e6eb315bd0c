"""Newton hops with the unobservable ``y(x_k)`` replaced by an integral estimate.

``y(x_k) = y0 + integral_{x0}^{x_k} y'`` is estimated from derivative samples,
then ``x_{k+1} = x_k - y(x_k) / y'(x_k)``. Two flavours are provided:

* :func:`approximate_newton` re-integrates on a fresh even grid from the
  anchor at every iteration.
* :func:`hybrid_local_newton` runs local inversion first and reuses its
  samples for a single final hop.

Both reach an ``O(N^(-2*(m//2) - 2))`` noise floor when ``y' != 0`` at the root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DivergenceError, NonFiniteError, ZeroDerivativeError
from .local import DEFAULT_DERIVATIVE_FLOOR, _resolve_order, local_inversion
from .quadrature import em_integral_even, em_integral_uneven, gauss_legendre_nodes
from .target import DifferentiableTarget, Method, Probe, RootEstimate, check_finite


@dataclass(frozen=True)
class NewtonConfig:
    """Settings for :func:`approximate_newton`.

    ``stop_tolerance`` ends the loop early once ``|estimated y|`` drops below
    it. ``divergence_cap`` bounds ``|x_k - x0| / (1 + |x0|)``.
    """

    N: int
    iterations: int = 10
    m: int = 1
    stop_tolerance: float | None = None
    divergence_cap: float = 1e8

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")


class _Memo:
    """Remembers the last evaluation, so the hop reuses the grid's endpoint sample."""

    _unset = object()

    def __init__(self, f: Callable):
        self._f = f
        self._x = self._unset
        self._v = None

    def __call__(self, x):
        if self._x is not self._unset and x == self._x:
            return self._v
        self._v = self._f(x)
        self._x = x
        return self._v


def _growth_factor(hops) -> float:
    first, last = abs(hops[0]), abs(hops[-1])
    if first == 0:
        return math.inf if last else 0.0
    return float((last / first) ** (1.0 / (len(hops) - 1)))


def approximate_newton(target: DifferentiableTarget, config: NewtonConfig) -> RootEstimate:
    """Iterated Newton hops on Euler-Maclaurin estimates of ``y``.

    Each iteration samples ``y'`` at ``N + 1`` evenly spaced points between
    the anchor and the current iterate. With ``m >= 2``, ``y^(2k)`` for
    ``k <= m // 2`` are also evaluated at both ends.

    Raises:
        ZeroDerivativeError: ``y'`` vanished at an iterate.
        DivergenceError: iterates passed ``divergence_cap``, or the hop lengths
            grew on average over the whole run (the overshooting regime).
    """
    m = config.m
    needed = max(1, 2 * (m // 2))
    if needed > target.order:
        raise ValueError(f"m={m} needs {needed} derivatives, target has {target.order}")
    x0, y0 = target.anchor_x, target.anchor_y
    x = x0
    probe = Probe(target.derivatives)
    fns = [_Memo(probe.fn(j)) for j in range(1, needed + 1)]
    iterates = [x]
    hops = []
    if y0 == 0:
        return RootEstimate(x, config.N, 0, Method.NEWTON, iterations=0)

    scale = config.divergence_cap * (1 + abs(x0))
    done = 0
    for _ in range(config.iterations):
        y_est = y0 + em_integral_even(fns, x0, x, config.N, m)
        slope = fns[0](x)
        if config.stop_tolerance is not None and abs(y_est) <= config.stop_tolerance:
            break
        if abs(slope) <= DEFAULT_DERIVATIVE_FLOOR:
            raise ZeroDerivativeError(f"y'({x!r}) = {slope!r}: cannot take a Newton hop")
        dx = -y_est / slope
        x = check_finite(x + dx)
        hops.append(dx)
        iterates.append(x)
        done += 1
        if abs(x - x0) > scale:
            raise DivergenceError(
                f"iterate {x!r} passed the divergence cap after {done} hops",
                iterates, _growth_factor(hops) if len(hops) > 1 else math.inf,
            )
    if len(hops) >= 3:
        growth = _growth_factor(hops)
        if growth > 1:
            raise DivergenceError(
                f"hop lengths grew by x{growth:.4g} per hop over {done} hops (overshooting)",
                iterates, growth,
            )
    return RootEstimate(x, config.N, probe.evals, Method.NEWTON, iterations=done,
                        notes={"iterates": iterates})


def hybrid_local_newton(target: DifferentiableTarget, N: int, m: int | None = None) -> RootEstimate:
    """Local inversion with ``m`` derivatives, then one Newton hop.

    The hop's ``y(x_N)`` comes from :func:`em_integral_uneven` over the
    inching samples; only ``x_N`` itself needs fresh derivative evaluations.
    """
    m = _resolve_order(target, m)
    local = local_inversion(target, N, m, trace=True)
    if local.steps == 0:
        return RootEstimate(local.root, 0, 0, Method.HYBRID, trace=local.trace)
    trace = local.trace
    probe = Probe(target.derivatives)
    x_end = local.root
    nd = 2 * (m // 2)
    end = probe.upto(max(1, nd), x_end)
    xs = [s.x for s in trace] + [x_end]
    dys = [s.derivatives[0] for s in trace] + [end[0]]
    boundary = (trace[0].derivatives[:nd], end[:nd]) if nd else None
    y_est = target.anchor_y + em_integral_uneven(xs, dys, m, boundary=boundary)
    if abs(end[0]) <= DEFAULT_DERIVATIVE_FLOOR:
        raise ZeroDerivativeError(f"y'({x_end!r}) = {end[0]!r}: cannot take the final hop")
    root = check_finite(x_end - y_est / end[0])
    return RootEstimate(
        root, N, local.derivative_evals + probe.evals, Method.HYBRID,
        iterations=1, trace=trace,
        notes={"local_root": x_end, "y_estimate": y_est},
    )


def solve_explicit_integrand(anchor_x: float, anchor_y: float,
                             dydx_of_y: Callable[[float], float], nodes: int) -> float:
    """Root ``x0 - integral_0^{y0} dy / y'(x(y))`` by Gauss-Legendre quadrature.

    For targets whose slope is known as a function of the value, e.g.
    ``y = cos x`` with ``y' = -sqrt(1 - y^2)``.
    """
    t, w = gauss_legendre_nodes(nodes)
    half = anchor_y / 2
    total = 0.0
    for ti, wi in zip(t, w):
        y = half * (ti + 1)
        slope = dydx_of_y(y)
        inv = 1 / slope if slope != 0 else math.inf
        if not math.isfinite(inv):
            raise NonFiniteError(f"1/y' is non-finite at y={y!r}: y' vanishes in the range")
        total += wi * inv
    return float(anchor_x - half * total)
