"""Power-series reversion and the partition sums behind it.

A series ``dy = a_1 dx + a_2 dx^2 + ...`` is stored as the list
``[a_1, a_2, ...]`` (no constant term). Reversion follows the Lagrange
partition-sum formula, with the first three orders written out in closed
form because they dominate the hot path of :func:`inchroot.local_inversion`.

All routines use plain arithmetic on whatever scalar type they are handed,
so ``mpmath.mpf`` inputs are propagated at full precision. Integer weights
are kept as exact Python ints.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

from .errors import OrderCapError, ZeroDerivativeError

Partition = tuple[int, ...]
"""Multiplicities ``(s_1, s_2, ...)`` with ``sum(i * s_i) == n``; no trailing zeros."""

DEFAULT_MAX_ORDER = 16


def enumerate_partitions(n: int) -> list[Partition]:
    """Every partition of ``n`` in multiplicity form.

    Order is descending lexicographic on the multiplicity vector, so the
    all-ones partition ``(n,)`` comes first and ``(0, ..., 0, 1)`` last::

        >>> enumerate_partitions(2)
        [(2,), (0, 1)]
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return list(_partitions(n))


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[Partition, ...]:
    out: list[Partition] = []

    def rec(part: int, remaining: int, prefix: list[int]) -> None:
        if remaining == 0:
            while prefix and prefix[-1] == 0:
                prefix = prefix[:-1]
            out.append(tuple(prefix))
            return
        if part > remaining:
            return
        for s in range(remaining // part, -1, -1):
            rec(part + 1, remaining - s * part, prefix + [s])

    rec(1, n, [])
    return tuple(out)


@lru_cache(maxsize=None)
def _reversion_terms(n: int) -> tuple[tuple[Partition, int], ...]:
    """(partition of n-1, signed integer weight) pairs for the order-n coefficient.

    The weight is ``(-1)^S n(n+1)...(n-1+S) / prod(s_i!)`` with ``S = sum(s_i)``;
    it is always an integer.
    """
    terms = []
    for part in _partitions(n - 1):
        total = sum(part)
        rising = 1
        for r in range(total):
            rising *= n + r
        denom = 1
        for s in part:
            denom *= math.factorial(s)
        weight, rem = divmod(rising, denom)
        assert rem == 0
        terms.append((part, -weight if total % 2 else weight))
    return tuple(terms)


def _check_finite(values: Sequence, what: str) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{what} must be finite, got {v!r}")


def reversion_coefficient(n: int, forward: Sequence):
    """Order-``n`` inverse coefficient by the general partition sum."""
    a1 = forward[0]
    ratios = [a / a1 for a in forward[1:n]]
    total = 0
    for part, weight in _reversion_terms(n):
        term = weight
        for i, s in enumerate(part):
            if s:
                term = term * ratios[i] ** s
        total = total + term
    return total / (n * a1**n)


def invert_series(
    forward: Sequence,
    *,
    hardcoded: bool = True,
    max_order: int = DEFAULT_MAX_ORDER,
) -> list:
    """Coefficients ``A_1..A_m`` of the inverse series ``dx = sum A_j dy^j``.

    Args:
        forward: ``a_1..a_m`` with ``a_1 != 0``.
        hardcoded: use the closed forms for orders 1-3. Set ``False`` to push
            every order through the partition sum (used to cross-check).
        max_order: refuse series longer than this.

    Raises:
        ZeroDerivativeError: ``a_1 == 0``.
        OrderCapError: ``len(forward) > max_order``.
        ValueError: empty or non-finite input.
    """
    m = len(forward)
    if m < 1:
        raise ValueError("need at least one forward coefficient")
    if m > max_order:
        raise OrderCapError(f"series order {m} exceeds cap {max_order}")
    _check_finite(forward, "forward coefficients")
    a1 = forward[0]
    if a1 == 0:
        raise ZeroDerivativeError("leading coefficient a_1 is zero")

    if not hardcoded:
        return [reversion_coefficient(n, forward) for n in range(1, m + 1)]

    out = [1 / a1]
    if m > 1:
        a2 = forward[1]
        out.append(-a2 / a1**3)
    if m > 2:
        a3 = forward[2]
        out.append((2 * a2 * a2 - a1 * a3) / a1**5)
    for n in range(4, m + 1):
        out.append(reversion_coefficient(n, forward))
    return out


def _mul_truncated(p: Sequence, q: Sequence, order: int) -> list:
    # p, q hold coefficients of x^1, x^2, ...; the product starts at x^2.
    out = [0] * order
    for i, pi in enumerate(p):
        if i + 1 >= order:
            break
        for j, qj in enumerate(q):
            k = i + j + 1
            if k >= order:
                break
            out[k] = out[k] + pi * qj
    return out


def compose_series(outer: Sequence, inner: Sequence, order: int) -> list:
    """Coefficients of ``outer(inner(x))`` through ``x^order``.

    Both series have zero constant term and are given from the linear
    coefficient upwards.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    _check_finite(outer, "outer coefficients")
    _check_finite(inner, "inner coefficients")
    inner = list(inner[:order]) + [0] * max(0, order - len(inner))
    result = [0] * order
    power = list(inner)
    for j, c in enumerate(outer[:order]):
        if j > 0:
            power = _mul_truncated(power, inner, order)
        for k in range(order):
            result[k] = result[k] + c * power[k]
    return result


@lru_cache(maxsize=None)
def _faa_di_bruno_terms(n: int) -> tuple[tuple[Partition, int], ...]:
    terms = []
    for part in _partitions(n):
        denom = 1
        for l, s in enumerate(part, start=1):
            denom *= math.factorial(s) * math.factorial(l) ** s
        terms.append((part, math.factorial(n) // denom))
    return tuple(terms)


def faa_di_bruno(n: int, outer: Sequence, inner: Sequence):
    """``n``-th derivative of ``f(u(t))`` from derivative values at one point.

    Args:
        n: derivative order, ``n >= 0``.
        outer: ``f(u), f'(u), ..., f^(n)(u)``.
        inner: ``u'(t), u''(t), ..., u^(n)(t)`` (first derivative first).
    """
    if n == 0:
        return outer[0]
    if len(outer) < n + 1 or len(inner) < n:
        raise ValueError(f"order {n} needs {n + 1} outer and {n} inner derivatives")
    total = 0
    for part, weight in _faa_di_bruno_terms(n):
        term = weight * outer[sum(part)]
        for l, s in enumerate(part):
            if s:
                term = term * inner[l] ** s
        total = total + term
    return total
