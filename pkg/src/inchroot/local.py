"""Local inversion: inch toward a root in ``N`` equal drops of ``y``.

At each step the truncated Taylor series of ``y`` about the current point is
reverted and evaluated at ``dy = -y0 / N``. With ``m`` derivatives the root
estimate is off by ``O(N^-m)``, provided the root is reachable from the anchor
without crossing a stationary point.

Convergence of each reverted series is not checked at run time. When global
bounds are known, :func:`inverse_series_radius` and :func:`min_steps_for_radius`
give a sufficient step count.
"""

from __future__ import annotations

import math
from math import factorial

from .errors import DegenerateStepError, NegativeDiscriminantError, ZeroDerivativeError
from .series import DEFAULT_MAX_ORDER, invert_series
from .target import DifferentiableTarget, Method, Probe, RootEstimate, TraceStep, check_finite

DEFAULT_DERIVATIVE_FLOOR = 1e-300


def _resolve_order(target: DifferentiableTarget, m: int | None) -> int:
    if m is None:
        return target.order
    if not 1 <= m <= target.order:
        raise ValueError(f"order m={m} outside 1..{target.order} supplied derivatives")
    return m


def local_inversion(
    target: DifferentiableTarget,
    N: int,
    m: int | None = None,
    *,
    trace: bool = False,
    derivative_floor: float = DEFAULT_DERIVATIVE_FLOOR,
    max_order: int = DEFAULT_MAX_ORDER,
) -> RootEstimate:
    """Inch from the anchor to a root using ``m`` derivatives per step.

    Args:
        target: derivative evaluators and the anchor ``(x0, y0)``.
        N: number of steps; each drops the modelled ``y`` by ``y0 / N``.
        m: derivatives used per step (defaults to all supplied).
        trace: keep every ``(x_k, dx_k, derivatives at x_k)``; the hybrid
            method reuses these samples.
        derivative_floor: ``|y'|`` at or below this counts as a stationary point.

    Raises:
        ZeroDerivativeError: ``|y'(x_k)| <= derivative_floor`` at some step.
        NonFiniteError: a sample or iterate is not finite.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    m = _resolve_order(target, m)
    x = target.anchor_x
    y0 = target.anchor_y
    steps: list[TraceStep] | None = [] if trace else None
    if y0 == 0:
        return RootEstimate(x, 0, 0, Method.LOCAL, trace=steps)

    probe = Probe(target.derivatives)
    dy = -y0 / N
    inv_fact = [factorial(j) for j in range(1, m + 1)]
    comp = x - x  # Kahan compensation, in the iterate's own type
    for k in range(N):
        ders = probe.upto(m, x)
        if abs(ders[0]) <= derivative_floor:
            raise ZeroDerivativeError(
                f"y'({x!r}) = {ders[0]!r} at step {k}: no downhill path to a root"
            )
        if m == 1:
            dx = dy / ders[0]
        else:
            coefs = invert_series(
                [d / f for d, f in zip(ders, inv_fact)], max_order=max_order
            )
            acc = coefs[-1]
            for c in reversed(coefs[:-1]):
                acc = c + dy * acc
            dx = dy * acc
        if steps is not None:
            steps.append(TraceStep(x, dx, ders))
        t = dx - comp
        s = x + t
        comp = (s - x) - t
        x = check_finite(s)
    return RootEstimate(x, N, probe.evals, Method.LOCAL, trace=steps)


def branch_select_quadratic(a1, a2, dy, *, rel_floor: float = 1e-15):
    """Step ``dx`` solving ``a2 dx^2 + a1 dx = dy``.

    Picks the root that tends to ``dy / a1`` as ``a2 -> 0``, evaluated in the
    cancellation-free form ``2 dy / (a1 + sign(a1) sqrt(a1^2 + 4 a2 dy))``.
    At ``a1 == 0`` the positive root ``+sqrt(dy / a2)`` is returned.
    """
    if a1 == 0 and a2 == 0:
        raise DegenerateStepError("both a_1 and a_2 vanish")
    if a1 != 0 and abs(a2) <= rel_floor * abs(a1):
        return dy / a1
    disc = a1 * a1 + 4 * a2 * dy
    if disc < 0:
        raise NegativeDiscriminantError(
            f"a1^2 + 4 a2 dy = {disc!r} < 0: the step overshoots the model's extremum"
        )
    root = disc**0.5
    if a1 == 0:
        return root / (2 * a2) if a2 > 0 else -root / (2 * a2)
    denom = a1 + root if a1 >= 0 else a1 - root
    if denom == 0:
        raise DegenerateStepError(f"no finite step for a1={a1!r}, a2={a2!r}, dy={dy!r}")
    return 2 * dy / denom


def local_inversion_quadratic(target: DifferentiableTarget, N: int) -> RootEstimate:
    """Local inversion with each step solved from the local quadratic model.

    Works when the anchor itself is a stationary point (``y'(x0) = 0``,
    ``y''(x0) != 0``); the error then scales like ``N^-3/2``, and like
    ``N^-2`` otherwise.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if target.order < 2:
        raise ValueError("the quadratic variant needs first and second derivatives")
    x = target.anchor_x
    y0 = target.anchor_y
    if y0 == 0:
        return RootEstimate(x, 0, 0, Method.LOCAL_QUADRATIC)
    probe = Probe(target.derivatives)
    dy = -y0 / N
    comp = x - x
    for _ in range(N):
        d1, d2 = probe.upto(2, x)
        dx = branch_select_quadratic(d1, d2 / 2, dy)
        t = dx - comp
        s = x + t
        comp = (s - x) - t
        x = check_finite(s)
    return RootEstimate(x, N, probe.evals, Method.LOCAL_QUADRATIC)


def inverse_series_radius(slope: float, radius: float, bound: float) -> float:
    """Guaranteed convergence radius (in ``y``) of the reverted series at a point.

    ``slope`` is ``y'(x)``, ``radius`` the convergence radius of the forward
    series about ``x``, ``bound`` a bound on ``|y(x~) - y(x)|`` inside it.
    This is a diagnostic only; no solver calls it.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    return (slope * radius) ** 2 / (4 * bound)


def min_steps_for_radius(y0: float, min_radius: float) -> int:
    """Smallest ``N`` whose drop ``|y0| / N`` fits inside ``min_radius``."""
    if min_radius <= 0:
        raise ValueError("min_radius must be positive")
    return max(1, math.ceil(abs(y0) / min_radius))
