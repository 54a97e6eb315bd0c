"""Estimating ``y(b) - y(a) = integral of y'`` from derivative samples.

Three estimators, in increasing sophistication:

* :func:`trapezoid_integral` on ``N + 1`` evenly spaced samples, ``O(N^-2)``.
* :func:`em_integral_even` adds Euler-Maclaurin end corrections built from
  higher even-order derivatives at the two endpoints, ``O(N^(-2*(m//2) - 2))``.
* :func:`em_integral_uneven` handles arbitrary monotone sample positions by
  fitting a spline ``x~(g)`` through them and integrating
  ``G(g) = y'(x~(g)) x~'(g)`` over ``g = 0..N``. The end corrections then need
  ``g``-derivatives of ``G``, obtained by Leibniz plus Faa di Bruno.

The correction weight is ``B_2k / (2k)!`` and it is *subtracted* from the
endpoint-halved sum: ``sum' G(g) = integral + sum_k B_2k/(2k)! (G^(2k-1)(N) -
G^(2k-1)(0)) + ...``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import NonFiniteError, OrderCapError, TooFewSamplesError
from .series import faa_di_bruno
from .spline import SplineInterpolant, fit_spline, spline_degree

MAX_BERNOULLI_K = 32
MAX_GAUSS_NODES = 64


@dataclass(frozen=True)
class BernoulliTable:
    """Even Bernoulli numbers ``B_2, B_4, ..., B_2K``."""

    exact: tuple[Fraction, ...]

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(float(b) for b in self.exact)

    def __len__(self):
        return len(self.exact)


@lru_cache(maxsize=None)
def _bernoulli(n_max: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{n} C(n+1, j) B_j = 0 for n >= 1, B_0 = 1 (B_1 = -1/2 convention).
    B = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = sum((math.comb(n + 1, j) * B[j] for j in range(n)), Fraction(0))
        B.append(-acc / (n + 1))
    return tuple(B)


def bernoulli_numbers(K: int) -> BernoulliTable:
    if not 1 <= K <= MAX_BERNOULLI_K:
        raise OrderCapError(f"K must be in 1..{MAX_BERNOULLI_K}, got {K}")
    B = _bernoulli(2 * K)
    return BernoulliTable(tuple(B[2 * k] for k in range(1, K + 1)))


@lru_cache(maxsize=None)
def _em_weight(k: int) -> Fraction:
    return _bernoulli(2 * k)[2 * k] / math.factorial(2 * k)


def _scaled(value, weight: Fraction):
    return value * weight.numerator / weight.denominator


def _finite(v, where):
    if not math.isfinite(v):
        raise NonFiniteError(f"non-finite derivative sample {v!r} at x={where!r}")
    return v


def trapezoid_integral(dfunc: Callable, x_start, x_end, N: int):
    """Trapezoid estimate of ``integral_{x_start}^{x_end} dfunc`` with ``N`` panels.

    The last sample is taken at ``x_end`` exactly. Reversed limits give a
    negative result.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if x_start == x_end:
        return x_end - x_start
    h = (x_end - x_start) / N
    first = _finite(dfunc(x_start), x_start)
    total = first / 2
    for i in range(1, N):
        x = x_start + i * h
        total = total + _finite(dfunc(x), x)
    total = total + _finite(dfunc(x_end), x_end) / 2
    return total * h


def em_integral_even(derivatives: Sequence[Callable], x_start, x_end, N: int, m: int):
    """Euler-Maclaurin-corrected trapezoid rule on an even grid.

    Args:
        derivatives: ``y', y'', ...``; orders up to ``2 * (m // 2)`` are used.
        m: number of derivatives in play; ``m = 1`` is the plain trapezoid rule.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    K = m // 2
    if K > MAX_BERNOULLI_K:
        raise OrderCapError(f"m={m} needs more than {MAX_BERNOULLI_K} Bernoulli numbers")
    if len(derivatives) < 2 * K or not derivatives:
        raise ValueError(f"m={m} needs {max(1, 2 * K)} derivative evaluators")
    total = trapezoid_integral(derivatives[0], x_start, x_end, N)
    if K == 0 or x_start == x_end:
        return total
    h = (x_end - x_start) / N
    for k in range(1, K + 1):
        f = derivatives[2 * k - 1]
        diff = _finite(f(x_end), x_end) - _finite(f(x_start), x_start)
        total = total - _scaled(h ** (2 * k) * diff, _em_weight(k))
    return total


def _G_derivative(ys: Sequence, xd: Sequence, j: int):
    """``d^j/dg^j [y'(x~(g)) x~'(g)]`` from point values.

    ``ys[q] = y^(q+1)(x~)`` for ``q = 0..j`` and ``xd[l - 1] = x~^(l)`` for
    ``l = 1..j+1``.
    """
    total = 0
    for i in range(j + 1):
        # i-th derivative of F(g) = y'(x~(g)).
        F_i = faa_di_bruno(i, ys, xd) if i else ys[0]
        total = total + math.comb(j, i) * F_i * xd[j - i]
    return total


def faa_di_bruno_G_derivative(derivatives: Sequence[Callable], spline: SplineInterpolant,
                              g, j: int):
    """``j``-th ``g``-derivative of ``G(g) = y'(x~(g)) dx~/dg`` at ``g``.

    Needs ``y^(1)..y^(j+1)`` and a spline of degree at least ``j + 1``.
    """
    if j < 0:
        raise ValueError("order must be non-negative")
    if len(derivatives) < j + 1:
        raise ValueError(f"order {j} needs derivatives up to y^({j + 1})")
    if spline.degree < j + 1:
        raise ValueError(f"order {j} needs a spline of degree >= {j + 1}, got {spline.degree}")
    xd = spline.derivatives_at(g, j + 1)
    x = xd[0]
    ys = [derivatives[q](x) for q in range(j + 1)]
    return _G_derivative(ys, xd[1:], j)


def _trapezoid_uneven(xs: Sequence, dys: Sequence):
    total = xs[0] - xs[0]
    for i in range(len(xs) - 1):
        total = total + (xs[i + 1] - xs[i]) * (dys[i] + dys[i + 1]) / 2
    return total


def em_integral_uneven(
    xs: Sequence,
    dys: Sequence,
    m: int,
    *,
    derivatives: Sequence[Callable] | None = None,
    boundary: tuple[Sequence, Sequence] | None = None,
):
    """Euler-Maclaurin estimate of ``integral_{xs[0]}^{xs[-1]} y'`` from uneven samples.

    Args:
        xs: strictly monotone sample positions ``x~_0..x~_N``.
        dys: ``y'(x~_i)`` at each position; these are not re-evaluated.
        m: derivatives in play; sets the spline degree and correction count.
        derivatives: ``y', y'', ...`` used for end corrections when
            ``boundary`` is not given.
        boundary: ``(at_start, at_end)``, each ``y^(1)..y^(2*(m//2))`` already
            sampled at ``xs[0]`` and ``xs[-1]``.

    With fewer samples than the spline needs, falls back to the trapezoid
    rule over the given panels.
    """
    if len(xs) != len(dys):
        raise ValueError("xs and dys must have equal length")
    if len(xs) < 2:
        raise TooFewSamplesError("need at least two samples")
    k = spline_degree(m)
    if len(xs) < k + 1:
        return _trapezoid_uneven(xs, dys)
    K = m // 2
    nd = 2 * K
    if K:
        if boundary is None:
            if derivatives is None or len(derivatives) < nd:
                raise ValueError(f"end corrections need y^(1)..y^({nd})")
            boundary = tuple(
                [derivatives[q](x) for q in range(nd)] for x in (xs[0], xs[-1])
            )
        elif any(len(b) < nd for b in boundary):
            raise ValueError(f"boundary values must include y^(1)..y^({nd})")

    spline = fit_spline(xs, m)
    slopes = spline.knot_values(1)
    total = -(dys[0] * slopes[0] + dys[-1] * slopes[-1]) / 2
    for d, s in zip(dys, slopes):
        total = total + d * s
    N = len(xs) - 1
    for kk in range(1, K + 1):
        j = 2 * kk - 1
        ends = []
        for g, vals in ((N, boundary[1]), (0, boundary[0])):
            xd = spline.derivatives_at(g, j + 1)[1:]
            ends.append(_G_derivative(vals, xd, j))
        total = total - _scaled(ends[0] - ends[1], _em_weight(kk))
    return total


def gauss_legendre_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on ``[-1, 1]``.

    The ``i``-th zero of ``P_n`` (counting from ``x = 1``) lies between
    ``cos(i pi / (n + 1/2))`` and ``cos((i - 1/2) pi / (n + 1/2))``. Newton's
    method runs inside that bracket, bisecting whenever a step would leave
    it, until the update is below two ulps.
    """
    if not 1 <= n <= MAX_GAUSS_NODES:
        raise OrderCapError(f"n must be in 1..{MAX_GAUSS_NODES}, got {n}")
    nodes = np.empty(n)
    weights = np.empty(n)
    c = n + 0.5
    for i in range(1, (n + 1) // 2 + 1):
        a = math.cos(math.pi * i / c)
        b = math.cos(math.pi * (i - 0.5) / c)
        pa = _legendre(n, a)[0]
        x = math.cos(math.pi * (i - 0.25) / c)
        for _ in range(200):
            p, dp = _legendre(n, x)
            if p == 0:
                break
            if (p < 0) == (pa < 0):
                a, pa = x, p
            else:
                b = x
            x_new = x - p / dp
            if not a < x_new < b:
                x_new = 0.5 * (a + b)
            converged = abs(x_new - x) <= 2 * math.ulp(x)
            x = x_new
            if converged:
                break
        if 2 * i - 1 == n:
            x = 0.0
        dp = _legendre(n, x)[1]
        nodes[i - 1], nodes[n - i] = x, -x
        weights[i - 1] = weights[n - i] = 2.0 / ((1.0 - x * x) * dp * dp)
    return nodes[::-1].copy(), weights[::-1].copy()


def _legendre(n: int, x: float) -> tuple[float, float]:
    p0, p1 = 1.0, x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp
