"""Command-line front end.

    boundlattice sweep    [--t-grid ...] [--tol] [--format json|csv] [--jobs N] [--n-range LO-HI] [--orbits] [--out PATH]
    boundlattice inspect  SUBSET
    boundlattice map-diag {gamma1,gamma2,Gamma,Gamma2_component} T
    boundlattice orbits   [--n-range LO-HI]

Exit codes: 0 clean, 1 usage error, 2 internal consistency violation.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import detection as det
from . import maps
from .equivalence import DEFAULT_GROUP, GROUPS, canonical_form, orbit_table
from .ppt import ppt_combinatorial, ppt_spectral, pt_spectrum_closed_form, partial_transpose_state
from .separability import separability_certificate
from .states import LatticeSubset, lattice_state, parse_grid, render_grid
from .linalg import eigvalsh
from .sweep import SweepConfig, emit_records, format_summary, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_CONSISTENCY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _t_grid(text: str) -> tuple:
    return tuple(float(x) for x in text.replace(",", " ").split())


def _n_range(text: str) -> tuple:
    lo, _, hi = text.partition("-")
    return int(lo), int(hi or lo)


def parse_subset(text: str) -> LatticeSubset:
    """Accepts a JSON site list ``[[0,2],[1,1]]``, a mask (``0x1234`` or decimal), or a grid file path."""
    text = text.strip()
    if text.startswith("["):
        return LatticeSubset.from_json(json.loads(text))
    try:
        return LatticeSubset(int(text, 0))
    except ValueError:
        with open(text, encoding="utf-8") as fh:
            return parse_grid(fh.read())


def _config(args) -> SweepConfig:
    return SweepConfig(t_grid=args.t_grid, tolerance=args.tol, jobs=getattr(args, "jobs", 1),
                       output_format=getattr(args, "format", "json"), n_range=getattr(args, "n_range", None),
                       orbits_only=getattr(args, "orbits", False), group=args.group)


def cmd_sweep(args) -> int:
    cfg = _config(args)
    result = run_sweep(cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(emit_records(result.records, cfg.output_format))
    print(format_summary(result.summary))
    for m in result.discrepancies:
        print(f"PPT route disagreement at mask {m:#06x}", file=sys.stderr)
    for m, msg in result.conflicts:
        print(f"certificate/detection conflict at mask {m:#06x}: {msg}", file=sys.stderr)
    return EXIT_OK if result.clean else EXIT_CONSISTENCY


def inspect_report(subset: LatticeSubset, cfg: SweepConfig) -> tuple[str, bool]:
    """Text report for one subset and whether the internal cross-checks agreed."""
    state = lattice_state(subset)
    out = [f"subset {subset}  mask {subset.mask:#06x}  N_I = {subset.n}", render_grid(subset), ""]
    comb, spec = ppt_combinatorial(subset), ppt_spectral(state, cfg.tolerance)
    closed = np.sort(pt_spectrum_closed_form(state.weights).ravel())[::-1]
    numeric = eigvalsh(partial_transpose_state(state))
    out.append(f"PPT  combinatorial={comb}  spectral={spec}")
    out.append("partial transpose spectrum, closed form: " + " ".join(f"{x:+.6f}" for x in closed))
    out.append("partial transpose spectrum, numerical:   " + " ".join(f"{x:+.6f}" for x in numeric))
    ok = comb == spec and np.allclose(closed, numeric, atol=1e-10)
    out.append("")
    out.append("t        min R_mn   at       D_Gamma")
    for t in cfg.t_grid:
        value, site = det.evolved_spectrum(subset, t).min()
        out.append(f"{t:<8g} {value:+.3e}  ({site.col},{site.row})   {det.witness_lattice(subset, t):+.3e}")
    w = det.line_witness(subset)
    out.append("")
    out.append("single-member line: " + ("none" if w is None else
               f"column {w.col} + row {w.row} meets I only at ({w.member.col},{w.member.row})"))
    canon = canonical_form(subset, cfg.group)
    _, sizes = orbit_table(cfg.group)
    out.append(f"canonical form {canon.mask:#06x}, orbit size {int(sizes[subset.mask])}")
    try:
        verdict = det.classify(subset, cfg.t_grid, cfg.tolerance, cfg.group)
    except det.ConsistencyError as exc:
        out.append(f"CONSISTENCY VIOLATION: {exc}")
        return "\n".join(out), False
    out.append(f"verdict {verdict.kind.value}  evidence {json.dumps(verdict.evidence)}")
    cert = separability_certificate(subset, cfg.group) if verdict.kind is det.VerdictKind.SEPARABLE_CERTIFIED else None
    if cert is not None:
        out.append(f"certificate {cert.kind.value}")
    return "\n".join(out), ok


def cmd_inspect(args) -> int:
    subset = parse_subset(args.subset)
    if subset.n == 0:
        print("empty subset", file=sys.stderr)
        return EXIT_USAGE
    report, ok = inspect_report(subset, _config(args))
    print(report)
    return EXIT_OK if ok else EXIT_CONSISTENCY


MAP_KINDS = ("gamma1", "gamma2", "Gamma", "Gamma2_component")


def map_diag_report(kind: str, t: float) -> dict:
    if t < 0:
        raise ValueError("t must be nonnegative")
    if kind == "Gamma2_component":
        m = maps.semigroup_components(t)[1]
    else:
        m = maps.semigroup_map(kind, t)
    ev = maps.choi_eigenvalues(m)
    return {
        "kind": kind,
        "t": t,
        "choi_eigenvalues": [float(x) for x in ev],
        "cp": bool(ev[-1] >= -1e-10),
        "trace_preserving": maps.is_trace_preserving(m),
        "decomposition_residual": maps.decomposition_residual(t),
    }


def cmd_map_diag(args) -> int:
    try:
        report = map_diag_report(args.kind, args.t)
    except ValueError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(report, indent=1))
    return EXIT_OK


def cmd_orbits(args) -> int:
    canon, sizes = orbit_table(args.group)
    lo, hi = args.n_range or (1, 16)
    reps = sorted({int(c) for c in canon[1:] if lo <= bin(int(c)).count("1") <= hi},
                  key=lambda m: (bin(m).count("1"), m))
    print(f"{'mask':>7} {'N_I':>4} {'size':>6} {'PPT':>5}  sites")
    for m in reps:
        sub = LatticeSubset(m)
        print(f"{m:#07x} {sub.n:>4} {int(sizes[m]):>6} {str(ppt_combinatorial(sub)):>5}  {sub}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boundlattice", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--t-grid", type=_t_grid, default=det.DEFAULT_T_GRID)
        p.add_argument("--tol", type=float, default=det.DETECTION_TOL)
        p.add_argument("--group", choices=GROUPS, default=DEFAULT_GROUP)

    p = sub.add_parser("sweep", help="classify every lattice subset")
    common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--n-range", type=_n_range)
    p.add_argument("--orbits", action="store_true", help="one record per canonical form")
    p.add_argument("--out", help="write records to this path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("inspect", help="detailed report for one subset")
    common(p)
    p.add_argument("subset", help="JSON site list, mask, or grid file")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("map-diag", help="Choi spectrum and CP flag of a semigroup map")
    p.add_argument("kind", choices=MAP_KINDS)
    p.add_argument("t", type=float)
    p.set_defaults(func=cmd_map_diag)

    p = sub.add_parser("orbits", help="list canonical forms")
    p.add_argument("--n-range", type=_n_range)
    p.add_argument("--group", choices=GROUPS, default=DEFAULT_GROUP)
    p.set_defaults(func=cmd_orbits)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
