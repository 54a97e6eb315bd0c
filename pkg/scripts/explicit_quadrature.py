"""pi/4 from the explicit slope y' = -sqrt(1 - y^2) by Gauss-Legendre quadrature."""

import math
import sys

from inchroot.fixtures import arccos_fixture
from inchroot.newton import solve_explicit_integrand


def main():
    f = arccos_fixture()
    t = f.target
    print(f"{'nodes':>5} {'estimate':>20} {'error':>10}")
    for n in (1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20):
        x = solve_explicit_integrand(t.anchor_x, t.anchor_y, f.dydx_of_y, n)
        print(f"{n:5d} {x:20.16f} {abs(x - math.pi / 4):10.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
