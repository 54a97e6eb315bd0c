"""Local inversion for gradient systems ``grad f(x) = 0``.

The gradient is driven to zero in ``N`` equal steps ``-g0 / N`` through
first-order Hessian solves. The hybrid variant reconstructs the terminal
gradient from the Hessians already sampled along the path and takes one
Newton hop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonFiniteError, SingularMatrixError
from .target import Method, RootEstimate

DEFAULT_CONDITION_CAP = 1e12


@dataclass(frozen=True)
class GradientTarget:
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray]
    anchor_point: np.ndarray
    anchor_gradient: np.ndarray

    def __post_init__(self):
        x0 = np.atleast_1d(np.asarray(self.anchor_point, dtype=float))
        g0 = np.atleast_1d(np.asarray(self.anchor_gradient, dtype=float))
        if x0.ndim != 1 or x0.shape != g0.shape:
            raise ValueError("anchor point and gradient must be vectors of equal length")
        if not (np.all(np.isfinite(x0)) and np.all(np.isfinite(g0))):
            raise ValueError("anchor values must be finite")
        object.__setattr__(self, "anchor_point", x0)
        object.__setattr__(self, "anchor_gradient", g0)

    @property
    def dimension(self) -> int:
        return self.anchor_point.size


def lu_factor(H: np.ndarray, pivot_tol: float = 0.0):
    """Partial-pivoting LU of a square matrix; returns ``(LU, perm)``."""
    A = np.array(H, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteError("matrix has non-finite entries")
    n = A.shape[0]
    perm = np.arange(n)
    scale = np.abs(A).max() if A.size else 0.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= pivot_tol * scale or A[p, k] == 0:
            raise SingularMatrixError(f"zero pivot in column {k}")
        if p != k:
            A[[k, p]] = A[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        if k + 1 < n:
            A[k + 1:, k] /= A[k, k]
            A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:])
    return A, perm


def lu_solve(factors, b: np.ndarray, transpose: bool = False) -> np.ndarray:
    LU, perm = factors
    n = LU.shape[0]
    b = np.asarray(b, dtype=float)
    if not transpose:
        y = b[perm].copy()
        for i in range(1, n):
            y[i] -= LU[i, :i] @ y[:i]
        for i in range(n - 1, -1, -1):
            y[i] = (y[i] - LU[i, i + 1:] @ y[i + 1:]) / LU[i, i]
        return y
    # solve A^T x = b with A = P^T L U:  U^T z = b, L^T w = z, x = P^T w
    z = b.copy()
    for i in range(n):
        z[i] = (z[i] - LU[:i, i] @ z[:i]) / LU[i, i]
    for i in range(n - 2, -1, -1):
        z[i] -= LU[i + 1:, i] @ z[i + 1:]
    x = np.empty(n)
    x[perm] = z
    return x


def condition_estimate(H: np.ndarray, factors=None) -> float:
    """1-norm condition number estimate (Hager's method on the LU factors)."""
    if factors is None:
        factors = lu_factor(H)
    n = factors[0].shape[0]
    x = np.full(n, 1.0 / n)
    est = 0.0
    for _ in range(5):
        y = lu_solve(factors, x)
        est_new = np.abs(y).sum()
        xi = np.where(y >= 0, 1.0, -1.0)
        z = lu_solve(factors, xi, transpose=True)
        j = int(np.argmax(np.abs(z)))
        if est_new <= est or np.abs(z).max() <= z @ x:
            est = max(est, est_new)
            break
        est = est_new
        x = np.zeros(n)
        x[j] = 1.0
    return float(np.abs(H).sum(axis=0).max() * est)


def determinant_sign(factors) -> int:
    LU, perm = factors
    n = perm.size
    # parity of the permutation via cycle count
    seen = np.zeros(n, dtype=bool)
    cycles = 0
    for i in range(n):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    parity = -1 if (n - cycles) % 2 else 1
    return parity * int(np.prod(np.sign(np.diag(LU))))


def _checked_factors(H: np.ndarray, condition_cap: float | None):
    factors = lu_factor(H)
    if condition_cap is not None:
        cond = condition_estimate(H, factors)
        if not cond <= condition_cap:
            raise SingularMatrixError(
                f"condition estimate {cond:.3g} exceeds cap {condition_cap:.3g}", cond
            )
    return factors


def linear_solve(H: np.ndarray, b: np.ndarray, condition_cap: float | None = None) -> np.ndarray:
    """Solve ``H x = b`` by partial-pivoting elimination.

    Raises:
        SingularMatrixError: a zero pivot, or an estimated 1-norm condition
            number above ``condition_cap``.
    """
    return lu_solve(_checked_factors(H, condition_cap), b)


def _inch(target: GradientTarget, N: int, condition_cap: float, keep_hessians: bool):
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    x = target.anchor_point.copy()
    comp = np.zeros_like(x)
    step = -target.anchor_gradient / N
    path = [x.copy()]
    hessians = []
    sign = 0
    for k in range(N):
        H = np.asarray(target.hessian(x), dtype=float)
        if keep_hessians:
            hessians.append(H)
        factors = _checked_factors(H, condition_cap)
        s_k = determinant_sign(factors)
        if sign and s_k != sign:
            raise SingularMatrixError(
                f"Hessian determinant changed sign at step {k}: the path crossed a singular Hessian"
            )
        sign = s_k
        dx = lu_solve(factors, step)
        t = dx - comp
        s = x + t
        comp = (s - x) - t
        x = s
        if not np.all(np.isfinite(x)):
            raise NonFiniteError(f"iterate left the finite range: {x}")
        path.append(x.copy())
    return x, path, hessians


def local_inversion_nd(target: GradientTarget, N: int, *,
                       condition_cap: float = DEFAULT_CONDITION_CAP) -> RootEstimate:
    """``N`` steps of ``x <- x + H(x)^-1 (-g0 / N)``; error ``O(N^-1)``.

    Raises:
        SingularMatrixError: a Hessian above ``condition_cap``, or a change in
            the sign of ``det H`` between steps (the path stepped over a
            singular Hessian, the analogue of crossing ``y' = 0``).
        NonFiniteError: an iterate overflowed.
    """
    if not np.any(target.anchor_gradient):
        return RootEstimate(target.anchor_point.copy(), 0, 0, Method.ND_LOCAL)
    x, path, _ = _inch(target, N, condition_cap, keep_hessians=False)
    return RootEstimate(x, N, N, Method.ND_LOCAL, notes={"path": path})


def hybrid_nd(target: GradientTarget, N: int, *,
              condition_cap: float = DEFAULT_CONDITION_CAP) -> RootEstimate:
    """Inch, then one Newton hop on a path-integral gradient estimate; error ``O(N^-2)``.

    The terminal gradient is ``g0 + sum_k (H_k + H_{k+1}) / 2 . (x_{k+1} - x_k)``,
    the trapezoid rule along the piecewise-linear inching path.
    """
    if not np.any(target.anchor_gradient):
        return RootEstimate(target.anchor_point.copy(), 0, 0, Method.ND_HYBRID)
    x, path, hessians = _inch(target, N, condition_cap, keep_hessians=True)
    H_end = np.asarray(target.hessian(x), dtype=float)
    hessians.append(H_end)
    g = target.anchor_gradient.copy()
    for k in range(N):
        g += 0.5 * (hessians[k] + hessians[k + 1]) @ (path[k + 1] - path[k])
    root = x - linear_solve(H_end, g, condition_cap)
    if not np.all(np.isfinite(root)):
        raise NonFiniteError(f"final hop left the finite range: {root}")
    return RootEstimate(root, N, N + 1, Method.ND_HYBRID, iterations=1,
                        notes={"local_root": x, "gradient_estimate": g})
