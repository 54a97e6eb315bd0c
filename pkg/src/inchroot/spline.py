"""Odd-degree interpolating splines over the integer grid ``g = 0..N``.

Used to reparameterize unevenly spaced samples ``x~_0..x~_N`` so the
Euler-Maclaurin formula can be applied in the evenly spaced variable ``g``.

The spline is held in B-spline form (knot vector plus coefficients), and
each knot interval carries one polynomial piece. Two closures are offered:

* ``"natural"`` (cubic only): second derivative zero at both ends.
* ``"not-a-knot"``: the ``(k - 1) / 2`` sites nearest each end are not
  breakpoints, so the end pieces span several grid cells.

Arithmetic is plain Python on the values' own type, so ``mpmath.mpf`` data
is fitted and evaluated at full precision.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NonMonotoneError, SingularMatrixError, TooFewSamplesError


def spline_degree(m: int) -> int:
    """Degree used with ``m`` derivatives: ``2 * (m // 2) + 1``, cubic for ``m = 1``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return 3 if m == 1 else 2 * (m // 2) + 1


def _find_span(t: Sequence, k: int, n: int, u, side: str) -> int:
    # Interval index s with t[s] <= u < t[s+1] (right) or t[s] < u <= t[s+1] (left).
    s = (bisect_right(t, u) if side == "right" else bisect_left(t, u)) - 1
    return min(max(s, k), n - 1)


def _basis(t: Sequence, k: int, s: int, u, one) -> list:
    """Values of the k+1 non-zero degree-k B-splines on interval ``s`` at ``u``."""
    vals = [one] + [one * 0] * k
    left = [None] * (k + 1)
    right = [None] * (k + 1)
    for j in range(1, k + 1):
        left[j] = u - t[s + 1 - j]
        right[j] = t[s + j] - u
        saved = one * 0
        for r in range(j):
            temp = vals[r] / (right[r + 1] + left[j - r])
            vals[r] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        vals[j] = saved
    return vals


def _differentiate(t: Sequence, c: Sequence, k: int) -> tuple[Sequence, list]:
    """Knots and coefficients of the derivative, a degree ``k - 1`` spline."""
    dc = [k * (c[i + 1] - c[i]) / (t[i + k + 1] - t[i + 1]) for i in range(len(c) - 1)]
    return t[1:-1], dc


def _evaluate(t: Sequence, c: Sequence, k: int, u, one, side: str = "right"):
    n = len(c)
    s = _find_span(t, k, n, u, side)
    b = _basis(t, k, s, u, one)
    total = one * 0
    for r in range(k + 1):
        total = total + c[s - k + r] * b[r]
    return total


def _solve_banded(rows: list[dict], rhs: list):
    """Gaussian elimination with partial pivoting on sparse banded rows (in place)."""
    n = len(rows)
    lower = max(i - min(r) for i, r in enumerate(rows))
    for c in range(n):
        stop = min(n, c + lower + 1)
        best, best_mag = -1, 0
        for r in range(c, stop):
            v = rows[r].get(c)
            if v is not None and abs(v) > best_mag:
                best, best_mag = r, abs(v)
        if best < 0:
            raise SingularMatrixError(f"zero pivot in column {c} of the collocation system")
        if best != c:
            rows[c], rows[best] = rows[best], rows[c]
            rhs[c], rhs[best] = rhs[best], rhs[c]
        prow = rows[c]
        piv = prow[c]
        for r in range(c + 1, stop):
            v = rows[r].pop(c, None)
            if v is None or v == 0:
                continue
            f = v / piv
            row = rows[r]
            for col, pv in prow.items():
                if col != c:
                    row[col] = row.get(col, 0) - f * pv
            rhs[r] = rhs[r] - f * rhs[c]
    x = [None] * n
    for c in range(n - 1, -1, -1):
        acc = rhs[c]
        for col, v in rows[c].items():
            if col != c:
                acc = acc - v * x[col]
        x[c] = acc / rows[c][c]
    return x


@dataclass(frozen=True)
class SplineInterpolant:
    """Interpolant ``x~(g)`` with ``x~(i) = values[i]`` for ``i = 0..N``.

    ``breakpoints`` is the full (clamped) knot vector and ``coefficients`` the
    B-spline coefficients; each interval between distinct breakpoints is one
    polynomial piece of ``degree``.
    """

    values: tuple
    degree: int
    closure: str
    breakpoints: tuple
    coefficients: tuple
    _derivs: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_intervals(self) -> int:
        return len(self.values) - 1

    @property
    def knots(self) -> range:
        return range(len(self.values))

    def _one(self):
        v = self.values[0]
        return v * 0 + 1

    def _derivative_form(self, nu: int):
        if nu not in self._derivs:
            t, c = self.breakpoints, self.coefficients
            for j in range(nu):
                t, c = _differentiate(t, c, self.degree - j)
            self._derivs[nu] = (t, c)
        return self._derivs[nu]

    def __call__(self, g, nu: int = 0, side: str = "right"):
        """``d^nu x~ / dg^nu`` at ``g``; ``side="left"`` takes the left limit at a breakpoint."""
        if nu < 0:
            raise ValueError("derivative order must be non-negative")
        one = self._one()
        if nu > self.degree:
            return one * 0
        if not 0 <= g <= self.n_intervals:
            raise ValueError(f"g={g!r} outside [0, {self.n_intervals}]")
        t, c = self._derivative_form(nu)
        return _evaluate(t, c, self.degree - nu, one * g, one, side)

    def derivatives_at(self, g, upto: int) -> list:
        """``[x~(g), x~'(g), ..., x~^(upto)(g)]``."""
        return [self(g, nu) for nu in range(upto + 1)]

    def knot_values(self, nu: int = 1) -> list:
        """``d^nu x~ / dg^nu`` at every grid point ``g = 0..N``."""
        return [self(i, nu) for i in self.knots]


def fit_spline(values: Sequence, m: int = 1, *, degree: int | None = None,
               closure: str | None = None) -> SplineInterpolant:
    """Interpolate ``values[i]`` at ``g = i``.

    The degree follows :func:`spline_degree` unless given. The closure defaults
    to ``"natural"`` for ``m = 1`` and ``"not-a-knot"`` otherwise.

    Raises:
        TooFewSamplesError: fewer than ``degree + 1`` samples.
        NonMonotoneError: values not strictly increasing or strictly decreasing.
    """
    values = tuple(values)
    k = spline_degree(m) if degree is None else degree
    if k < 1 or k % 2 == 0:
        raise ValueError(f"degree must be odd and positive, got {k}")
    if closure is None:
        closure = "natural" if m == 1 and k == 3 else "not-a-knot"
    if closure not in ("natural", "not-a-knot"):
        raise ValueError(f"unknown closure {closure!r}")
    if closure == "natural" and k != 3:
        raise ValueError("natural closure is only defined for cubic splines")
    if len(values) < k + 1:
        raise TooFewSamplesError(
            f"degree-{k} spline needs at least {k + 1} samples, got {len(values)}"
        )
    diffs = [b - a for a, b in zip(values, values[1:])]
    if not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
        raise NonMonotoneError("spline samples must be strictly monotone")

    N = len(values) - 1
    one = values[0] * 0 + 1
    if closure == "natural":
        t = (0,) * (k + 1) + tuple(range(1, N)) + (N,) * (k + 1)
    else:
        q = (k - 1) // 2
        t = (0,) * (k + 1) + tuple(range(q + 1, N - q)) + (N,) * (k + 1)
    n = len(t) - k - 1

    rows: list[dict] = []
    rhs: list = []
    for i in range(N + 1):
        u = one * i
        s = _find_span(t, k, n, u, "right")
        b = _basis(t, k, s, u, one)
        rows.append({s - k + r: b[r] for r in range(k + 1) if b[r] != 0})
        rhs.append(values[i])
    if closure == "natural":
        zero = one * 0
        for end, support, pos in ((0, range(0, k + 1), 0), (N, range(n - k - 1, n), None)):
            row = {}
            for j in support:
                unit = [zero] * n
                unit[j] = one
                tt, cc = _differentiate(t, unit, k)
                tt, cc = _differentiate(tt, cc, k - 1)
                v = _evaluate(tt, cc, k - 2, one * end, one)
                if v != 0:
                    row[j] = v
            if pos == 0:
                rows.insert(0, row)
                rhs.insert(0, zero)
            else:
                rows.append(row)
                rhs.append(zero)
    coefs = _solve_banded(rows, rhs)
    return SplineInterpolant(values, k, closure, t, tuple(coefs))
