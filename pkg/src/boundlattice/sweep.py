"""Exhaustive classification of all 65,535 lattice states."""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .detection import DEFAULT_T_GRID, DETECTION_TOL, ConsistencyError, VerdictKind, classify
from .equivalence import DEFAULT_GROUP, GROUPS, orbit_table
from .ppt import ppt_combinatorial_masks, pt_min_eigenvalues
from .states import FULL_MASK, LatticeSubset

CSV_COLUMNS = ("mask", "hex", "N_I", "ppt", "verdict", "evidence_t", "certificate", "canonical_mask", "orbit_size")


@dataclass
class SweepConfig:
    t_grid: tuple = DEFAULT_T_GRID
    tolerance: float = DETECTION_TOL
    jobs: int = 1
    output_format: str = "json"
    n_range: tuple | None = None     # inclusive (lo, hi)
    orbits_only: bool = False
    group: str = DEFAULT_GROUP

    def __post_init__(self):
        self.t_grid = tuple(float(t) for t in self.t_grid)
        if not self.t_grid or any(b <= a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise ValueError("t_grid must be nonempty and strictly ascending")
        if any(t < 0 for t in self.t_grid):
            raise ValueError("t_grid values must be nonnegative")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.output_format not in ("json", "csv"):
            raise ValueError("output format must be json or csv")
        if self.group not in GROUPS:
            raise ValueError(f"group must be one of {GROUPS}")
        if self.n_range is not None:
            lo, hi = self.n_range
            if not 1 <= lo <= hi <= 16:
                raise ValueError("n_range must satisfy 1 <= lo <= hi <= 16")
            self.n_range = (int(lo), int(hi))


@dataclass
class ClassificationRecord:
    sites: list
    mask: int
    n: int
    ppt_combinatorial: bool
    ppt_spectral: bool
    verdict: str
    evidence: dict = field(default_factory=dict)
    canonical_mask: int = 0
    orbit_size: int = 1

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "ClassificationRecord":
        return cls(**data)

    def csv_row(self) -> dict:
        return {
            "mask": self.mask,
            "hex": f"0x{self.mask:04x}",
            "N_I": self.n,
            "ppt": int(self.ppt_combinatorial),
            "verdict": self.verdict,
            "evidence_t": self.evidence.get("t", ""),
            "certificate": self.evidence.get("certificate", ""),
            "canonical_mask": self.canonical_mask,
            "orbit_size": self.orbit_size,
        }


@dataclass
class SweepResult:
    records: list
    summary: dict           # N_I -> Counter of column -> count
    discrepancies: list     # masks where the two PPT routes disagree
    conflicts: list         # (mask, message) where a certificate met a detection

    @property
    def clean(self) -> bool:
        return not self.discrepancies and not self.conflicts


SUMMARY_COLUMNS = ("total", "PPT", "NPT", "bound", "separable", "undetermined")
_VERDICT_COLUMN = {
    VerdictKind.NPT_ENTANGLED.value: "NPT",
    VerdictKind.BOUND_ENTANGLED.value: "bound",
    VerdictKind.SEPARABLE_CERTIFIED.value: "separable",
    VerdictKind.PPT_UNDETERMINED.value: "undetermined",
}


def _classify_one(args):
    mask, t_grid, tol, group = args
    try:
        v = classify(LatticeSubset(mask), t_grid, tol, group)
    except ConsistencyError as exc:
        return mask, None, str(exc)
    return mask, (v.kind.value, v.evidence), None


def _selected_masks(cfg: SweepConfig) -> np.ndarray:
    masks = np.arange(1, FULL_MASK + 1, dtype=np.int64)
    if cfg.n_range is not None:
        counts = np.array([bin(m).count("1") for m in masks])
        masks = masks[(counts >= cfg.n_range[0]) & (counts <= cfg.n_range[1])]
    if cfg.orbits_only:
        canon, _ = orbit_table(cfg.group)
        masks = masks[canon[masks] == masks]
    return masks


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Classify every selected subset.

    Classification is computed once per orbit (the verdict is orbit
    invariant by construction) and the PPT decision is cross-checked against
    brute-force diagonalization for every subset.
    """
    masks = _selected_masks(cfg)
    canon, sizes = orbit_table(cfg.group)
    combinatorial = ppt_combinatorial_masks(masks)
    spectral = pt_min_eigenvalues(masks) >= -cfg.tolerance
    discrepancies = [int(m) for m in masks[combinatorial != spectral]]

    reps = sorted(set(int(canon[m]) for m in masks))
    tasks = [(m, cfg.t_grid, cfg.tolerance, cfg.group) for m in reps]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_classify_one, tasks, chunksize=4))
    else:
        results = [_classify_one(t) for t in tasks]
    by_rep = {m: v for m, v, _ in results}
    conflicts = [(m, msg) for m, _, msg in results if msg is not None]

    records = []
    summary: dict = {}
    for m, comb, spec in zip(masks.tolist(), combinatorial.tolist(), spectral.tolist()):
        sub = LatticeSubset(m)
        rep = int(canon[m])
        verdict = by_rep[rep]
        kind, evidence = verdict if verdict is not None else ("CONSISTENCY_VIOLATION", {})
        records.append(ClassificationRecord(
            [list(s) for s in sub.to_json()], m, sub.n, comb, spec, kind, dict(evidence), rep, int(sizes[m])))
        row = summary.setdefault(sub.n, Counter())
        row["total"] += 1
        row["PPT"] += int(comb)
        row[_VERDICT_COLUMN.get(kind, "conflict")] += 1
    return SweepResult(records, summary, discrepancies, conflicts)


def format_summary(summary: dict) -> str:
    lines = ["N_I " + " ".join(f"{c:>12}" for c in SUMMARY_COLUMNS)]
    totals = Counter()
    for n in sorted(summary):
        row = summary[n]
        totals.update(row)
        lines.append(f"{n:>3} " + " ".join(f"{row.get(c, 0):>12}" for c in SUMMARY_COLUMNS))
    lines.append("all " + " ".join(f"{totals.get(c, 0):>12}" for c in SUMMARY_COLUMNS))
    return "\n".join(lines)


def emit_records(records, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.to_json() for r in records], indent=1)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for r in records:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def parse_records(text: str) -> list:
    return [ClassificationRecord.from_json(d) for d in json.loads(text)]
