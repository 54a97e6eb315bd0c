"""Stationary point of x1^4 + x1^2 + 3 x1 x2 + x2^2 + 7 x1 + 9 x2 by gradient inching."""

import argparse
import sys

import numpy as np

from inchroot.cli import StudySpec, fit_slope, parse_N_list, run_study
from inchroot.errors import SingularMatrixError
from inchroot.fixtures import COST2D_ROOT, cost2d_fixture
from inchroot.multidim import local_inversion_nd


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--N", default="logspace(2,4,5)")
    args = p.parse_args(argv)
    Ns = parse_N_list(args.N)
    print(f"root ({COST2D_ROOT[0]:.8f}, {COST2D_ROOT[1]:.8f})")
    for method in ("nd-local", "nd-hybrid"):
        rows = run_study(StudySpec("cost2d", method, 1, Ns))
        errs = " ".join(f"{r.abs_error:.2e}" for r in rows)
        print(f"{method:9s} slope {fit_slope(rows):6.3f}   errors {errs}")
    try:
        local_inversion_nd(cost2d_fixture((0.0, 0.0)).target, 1000)
    except SingularMatrixError as exc:
        print(f"from the origin: {exc}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
