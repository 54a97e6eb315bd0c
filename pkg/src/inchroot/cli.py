"""Convergence-study runner: sweep ``N`` for one solver on one fixture, emit CSV.

Example::

    inchroot --problem quintic --method hybrid --m 4 --N "logspace(2,4,5)" --slope
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
import time
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from .fixtures import FIXTURES, ProblemFixture, get_fixture
from .local import local_inversion, local_inversion_quadratic
from .multidim import hybrid_nd, local_inversion_nd
from .newton import NewtonConfig, approximate_newton, hybrid_local_newton, solve_explicit_integrand
from .target import Method

CSV_HEADER = ("problem", "method", "m", "N", "root_estimate", "abs_error",
              "derivative_evals", "wall_time_seconds", "error")
DEFAULT_N = "logspace(2,4,5)"

EXIT_OK, EXIT_USAGE, EXIT_INCOMPATIBLE, EXIT_ALL_FAILED = 0, 2, 3, 4

ND_METHODS = {Method.ND_LOCAL, Method.ND_HYBRID}


class IncompatibleStudyError(ValueError):
    """The method cannot run on the chosen fixture."""


@dataclass(frozen=True)
class StudySpec:
    problem: str
    method: Method
    m: int = 1
    N_list: tuple[int, ...] = (100, 316, 1000, 3162, 10000)
    iterations: int = 10
    seed: int = 0  # reserved; every solver is deterministic
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "N_list", tuple(int(n) for n in self.N_list))
        if not self.N_list or any(n < 1 for n in self.N_list):
            raise ValueError(f"N values must be positive integers, got {self.N_list}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")


@dataclass(frozen=True)
class StudyRow:
    problem: str
    method: str
    m: int
    N: int
    root_estimate: tuple[float, ...] | float | None
    abs_error: float | None
    derivative_evals: int | None
    wall_time_seconds: float
    error: str = ""

    def to_record(self) -> list[str]:
        root = self.root_estimate
        if root is None:
            root_s = ""
        elif isinstance(root, tuple):
            root_s = ";".join(repr(float(v)) for v in root)
        else:
            root_s = repr(float(root))
        return [
            self.problem, self.method, str(self.m), str(self.N), root_s,
            "" if self.abs_error is None else repr(float(self.abs_error)),
            "" if self.derivative_evals is None else str(self.derivative_evals),
            repr(float(self.wall_time_seconds)), self.error,
        ]

    @classmethod
    def from_record(cls, rec: Sequence[str]) -> "StudyRow":
        d = dict(zip(CSV_HEADER, rec))
        root_s = d["root_estimate"]
        if not root_s:
            root = None
        elif ";" in root_s:
            root = tuple(float(v) for v in root_s.split(";"))
        else:
            root = float(root_s)
        return cls(
            d["problem"], d["method"], int(d["m"]), int(d["N"]), root,
            float(d["abs_error"]) if d["abs_error"] else None,
            int(d["derivative_evals"]) if d["derivative_evals"] else None,
            float(d["wall_time_seconds"]), d["error"],
        )


def parse_N_list(text: str) -> tuple[int, ...]:
    """``"100,1000"`` or ``"logspace(a,b,k)"`` (``k`` points from ``10^a`` to ``10^b``, rounded)."""
    text = text.strip()
    m = re.fullmatch(r"logspace\(\s*([-+\d.eE]+)\s*,\s*([-+\d.eE]+)\s*,\s*(\d+)\s*\)", text)
    if m:
        a, b, k = float(m.group(1)), float(m.group(2)), int(m.group(3))
        if k < 1:
            raise ValueError("logspace needs at least one point")
        values = [int(round(v)) for v in np.logspace(a, b, k)]
        return tuple(dict.fromkeys(values))
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ValueError(f"cannot parse N list {text!r}") from None
    if not values:
        raise ValueError("empty N list")
    return values


def check_compatible(fixture: ProblemFixture, method: Method, m: int) -> None:
    if (method in ND_METHODS) != fixture.is_gradient:
        kind = "a gradient" if method in ND_METHODS else "a scalar"
        raise IncompatibleStudyError(f"method {method.value} needs {kind} fixture; {fixture.name} is not")
    if method is Method.EXPLICIT and fixture.dydx_of_y is None:
        raise IncompatibleStudyError(f"{fixture.name} has no explicit y'(y) form")
    if not fixture.is_gradient:
        need = {Method.LOCAL: m, Method.HYBRID: max(m, 2 * (m // 2)),
                Method.NEWTON: max(1, 2 * (m // 2)), Method.LOCAL_QUADRATIC: 2}.get(method, 1)
        if need > fixture.target.order:
            raise IncompatibleStudyError(
                f"{method.value} with m={m} needs {need} derivatives; {fixture.name} has "
                f"{fixture.target.order}"
            )


def _solve(fixture: ProblemFixture, method: Method, m: int, N: int, iterations: int):
    t = fixture.target
    if method is Method.LOCAL:
        est = local_inversion(t, N, m)
    elif method is Method.LOCAL_QUADRATIC:
        est = local_inversion_quadratic(t, N)
    elif method is Method.NEWTON:
        est = approximate_newton(t, NewtonConfig(N=N, iterations=iterations, m=m))
    elif method is Method.HYBRID:
        est = hybrid_local_newton(t, N, m)
    elif method is Method.ND_LOCAL:
        est = local_inversion_nd(t, N)
    elif method is Method.ND_HYBRID:
        est = hybrid_nd(t, N)
    else:
        root = solve_explicit_integrand(t.anchor_x, t.anchor_y, fixture.dydx_of_y, N)
        return root, N
    return est.root, est.derivative_evals


def run_study(spec: StudySpec) -> list[StudyRow]:
    """One row per ``N``; solver failures land in the ``error`` column.

    Raises:
        KeyError: unknown fixture.
        IncompatibleStudyError: method and fixture do not fit together.
    """
    fixture = get_fixture(spec.problem)
    check_compatible(fixture, spec.method, spec.m)
    oracle = np.asarray(fixture.oracle_root, dtype=float)
    rows = []
    for N in spec.N_list:
        start = time.perf_counter()
        try:
            root, evals = _solve(fixture, spec.method, spec.m, N, spec.iterations)
            err = float(np.linalg.norm(np.asarray(root, dtype=float) - oracle))
            value = tuple(float(v) for v in root) if fixture.is_gradient else float(root)
            row = dict(root_estimate=value, abs_error=err, derivative_evals=int(evals), error="")
        except (ArithmeticError, ValueError) as exc:
            row = dict(root_estimate=None, abs_error=None, derivative_evals=None,
                       error=f"{type(exc).__name__}: {exc}")
        rows.append(StudyRow(spec.problem, spec.method.value, spec.m, N,
                             wall_time_seconds=time.perf_counter() - start, **row))
    return rows


def fit_slope(rows: Sequence[StudyRow]) -> float:
    """Least-squares slope of ``log(abs_error)`` against ``log(N)``.

    Rows with missing, zero, or non-finite errors are skipped.

    Raises:
        ValueError: fewer than three usable rows.
    """
    pts = [(r.N, r.abs_error) for r in rows
           if r.abs_error is not None and r.abs_error > 0 and math.isfinite(r.abs_error)]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 rows with positive finite errors, got {len(pts)}")
    N, e = np.array(pts, dtype=float).T
    return float(np.polyfit(np.log(N), np.log(e), 1)[0])


def write_csv(rows: Sequence[StudyRow], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.to_record())


def read_csv(text: str) -> list[StudyRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected header {header}")
    return [StudyRow.from_record(rec) for rec in reader]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inchroot", description=__doc__.splitlines()[0])
    p.add_argument("--problem", required=True,
                   help=f"fixture name, optionally name:param ({', '.join(sorted(FIXTURES))})")
    p.add_argument("--method", required=True, choices=[m.value for m in Method])
    p.add_argument("--m", type=int, default=1, help="derivative order (default 1)")
    p.add_argument("--N", default=DEFAULT_N,
                   help=f"comma list or logspace(a,b,k) (default {DEFAULT_N}); node count for explicit")
    p.add_argument("--iterations", type=int, default=10, help="Newton hops (newton only)")
    p.add_argument("--seed", type=int, default=0, help="reserved")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", default="csv", choices=["csv"])
    p.add_argument("--slope", action="store_true", help="print the fitted log-log slope to stderr")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        spec = StudySpec(args.problem, Method(args.method), args.m, parse_N_list(args.N),
                         args.iterations, args.seed, args.out)
        rows = run_study(spec)
    except IncompatibleStudyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except (KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    if args.slope:
        try:
            print(f"slope: {fit_slope(rows):.4f}", file=sys.stderr)
        except ValueError as exc:
            print(f"slope: unavailable ({exc})", file=sys.stderr)
    if all(r.error for r in rows):
        return EXIT_ALL_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
