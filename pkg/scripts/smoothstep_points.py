"""Where r_n(x) = 0.9 for n in {1, 2, 10, 100}, using only r_n' and r_n''."""

import argparse
import sys

from inchroot.fixtures import smoothstep_fixture, smoothstep_inverse, smoothstep_r


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--level", type=float, default=0.9)
    p.add_argument("--orders", default="1,2,10,100")
    p.add_argument("--N", type=int, default=1000)
    args = p.parse_args(argv)
    print(f"{'n':>4} {'x':>20} {'r_n(x) - level':>16} {'oracle error':>14}")
    for n in (int(v) for v in args.orders.split(",")):
        x = smoothstep_inverse(n, args.level, "newton", N=args.N, m=2)
        oracle = smoothstep_fixture(n, args.level).oracle_root
        print(f"{n:4d} {x:20.15f} {smoothstep_r(n, x) - args.level:16.2e} {abs(x - oracle):14.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
