"""Approximate Newton vs local inversion on y = |x|^gamma from (1, 1)."""

import argparse
import sys

from inchroot.errors import DivergenceError
from inchroot.fixtures import curvature_fixture
from inchroot.local import local_inversion
from inchroot.newton import NewtonConfig, approximate_newton


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--gammas", default="0.4,0.8,2")
    p.add_argument("--N", type=int, default=100_001)
    p.add_argument("--iterations", type=int, default=10)
    args = p.parse_args(argv)
    for gamma in (float(g) for g in args.gammas.split(",")):
        f = curvature_fixture(gamma)
        print(f"gamma = {gamma:g}   exact first hop lands at {1 - 1 / gamma:+.4f}")
        try:
            est = approximate_newton(f.target, NewtonConfig(N=args.N, iterations=args.iterations))
            iterates = est.notes["iterates"]
            status = f"converging, |x| = {abs(est.root):.3g}"
        except DivergenceError as exc:
            iterates = exc.iterates
            status = f"diverging, growth factor {exc.growth_factor:.4f} per hop"
        print("  newton iterates:", " ".join(f"{x:+.4g}" for x in iterates))
        print("  newton:", status)
        x = local_inversion(f.target, 1000, 1).root
        print(f"  local inversion m=1 N=1000: x_N = {x:+.3g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
