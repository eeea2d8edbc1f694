"""Where the decomposable part of Gamma_t stops being CP, and where the witness
on the six-site boundary state turns nonnegative.

Both crossings should sit at t* = ln(3)/2.
"""
import argparse
import math

import numpy as np

from boundlattice.detection import witness_lattice
from boundlattice.maps import T_STAR, choi_eigenvalues, semigroup_components
from boundlattice.states import LatticeSubset

EDGE6 = LatticeSubset.from_sites([(0, 2), (1, 1), (2, 3), (3, 1), (3, 2), (3, 3)])


def bisect(f, lo, hi, iters=60, tol=0.0):
    """Last point where f < -tol, assuming a single crossing in [lo, hi]."""
    for _ in range(iters):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if f(mid) < -tol else (lo, mid)
    return (lo + hi) / 2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=12)
    args = ap.parse_args()

    g2_min = lambda t: choi_eigenvalues(semigroup_components(t)[1])[-1]
    print(f"{'t':>8} {'min eig choi(G2)':>18} {'D(t)':>12}")
    for t in np.linspace(0, 1, args.points):
        print(f"{t:8.3f} {g2_min(t):18.3e} {witness_lattice(EDGE6, t):12.3e}")
    # the Choi minimum is 0 at t = 0 and rounds to about -1e-17 above t*, hence the bracket and tol
    print(f"\nCP threshold of G2      {bisect(g2_min, 0.05, 1.0, tol=1e-14):.12f}")
    print(f"zero of D(t)            {bisect(lambda t: witness_lattice(EDGE6, t), 0.05, 1.0):.12f}")
    print(f"ln(3)/2                 {T_STAR:.12f}")


if __name__ == "__main__":
    main()
