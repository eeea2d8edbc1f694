"""Dense t-scan of every PPT class left undetermined by the census.

For each canonical class, report the smallest evolved eigenvalue over the
whole orbit and over a dense grid of t. A negative value would be a detection
missed by the default grid.
"""
import argparse

import numpy as np

from boundlattice.detection import evolved_values, line_witness_fires
from boundlattice.equivalence import orbit_masks
from boundlattice.sweep import SweepConfig, run_sweep
from boundlattice.states import masks_to_bits


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-max", type=float, default=3.0)
    ap.add_argument("--points", type=int, default=3000)
    ap.add_argument("--group", default="full", choices=("full", "lattice"))
    args = ap.parse_args()

    result = run_sweep(SweepConfig(orbits_only=True, group=args.group, jobs=4))
    reps = [r for r in result.records if r.verdict == "PPT_UNDETERMINED"]
    grid = np.linspace(1e-4, args.t_max, args.points)
    print(f"{len(reps)} undetermined classes, t in [{grid[0]:g}, {grid[-1]:g}] ({len(grid)} points)")
    print(f"{'class':>7} {'N_I':>4} {'orbit':>6} {'min R':>12} {'at t':>8}")
    for r in reps:
        ind = masks_to_bits(orbit_masks(r.mask, args.group)).reshape(-1, 4, 4)
        assert not line_witness_fires(ind).any()
        mins = np.array([evolved_values(ind, t).min() for t in grid])
        k = int(np.argmin(mins))
        print(f"{r.mask:#07x} {r.n:>4} {r.orbit_size:>6} {mins[k]:12.4e} {grid[k]:8.4f}")


if __name__ == "__main__":
    main()
