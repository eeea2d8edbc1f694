"""Classify all 65,535 lattice states and print the per-N_I summary.

    python3 scripts/run_census.py --jobs 8 --group full --out census.json
"""
import argparse
import json
import time

from boundlattice.sweep import SweepConfig, emit_records, format_summary, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--group", default="full", choices=("full", "lattice"))
    ap.add_argument("--out", help="write JSON records here")
    args = ap.parse_args()

    t0 = time.perf_counter()
    result = run_sweep(SweepConfig(jobs=args.jobs, group=args.group))
    print(format_summary(result.summary))
    print(f"\ngroup={args.group}  PPT route discrepancies={len(result.discrepancies)}  "
          f"conflicts={len(result.conflicts)}  ({time.perf_counter() - t0:.1f} s)")
    undetermined = sorted({r.canonical_mask for r in result.records if r.verdict == "PPT_UNDETERMINED"})
    print(f"undetermined classes ({len(undetermined)}): " + " ".join(f"{m:#06x}" for m in undetermined))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(emit_records(result.records, "json"))


if __name__ == "__main__":
    main()
