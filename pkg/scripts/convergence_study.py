"""Error vs N on y = x^5 - 3 from (2, 29) for local, newton and hybrid with m in {1, 2, 4}.

Writes one CSV per (method, m) into --outdir and prints fitted slopes. With
--digits > 16 the solvers run in mpmath, which removes the double-precision
floor that otherwise bends the high-order curves.
"""

import argparse
import csv
import sys
import time
from pathlib import Path

import numpy as np

from inchroot.cli import CSV_HEADER, StudySpec, fit_slope, parse_N_list, run_study, write_csv
from inchroot.local import local_inversion
from inchroot.newton import NewtonConfig, approximate_newton, hybrid_local_newton
from inchroot.target import DifferentiableTarget


def mp_rows(method, m, Ns, digits):
    import mpmath as mp

    from inchroot.cli import StudyRow

    rows = []
    with mp.workdps(digits):
        ders = (lambda x: 5 * x**4, lambda x: 20 * x**3, lambda x: 60 * x**2, lambda x: 120 * x)
        t = DifferentiableTarget(ders, mp.mpf(2), mp.mpf(29))
        root = mp.mpf(3) ** (mp.mpf(1) / 5)
        for N in Ns:
            t0 = time.perf_counter()
            if method == "local":
                est = local_inversion(t, N, m)
            elif method == "newton":
                est = approximate_newton(t, NewtonConfig(N=N, m=m))
            else:
                est = hybrid_local_newton(t, N, m)
            rows.append(StudyRow("quintic", method, m, N, float(est.root), float(abs(est.root - root)),
                                 est.derivative_evals, time.perf_counter() - t0))
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--N", default="logspace(2,4,5)")
    p.add_argument("--digits", type=int, default=16)
    p.add_argument("--outdir", default="results/convergence")
    args = p.parse_args(argv)
    Ns = parse_N_list(args.N)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for method in ("local", "newton", "hybrid"):
        for m in (1, 2, 4):
            if args.digits > 16:
                rows = mp_rows(method, m, Ns, args.digits)
            else:
                rows = run_study(StudySpec("quintic", method, m, Ns))
            with open(out / f"quintic_{method}_m{m}.csv", "w", encoding="utf-8", newline="") as fh:
                write_csv(rows, fh)
            try:
                s = f"{fit_slope(rows):7.3f}"
            except ValueError:
                s = "    n/a"
            errs = " ".join(f"{r.abs_error:.2e}" for r in rows)
            print(f"{method:7s} m={m}  slope {s}   errors {errs}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
