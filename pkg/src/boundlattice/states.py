"""Lattice subsets and the Bell-diagonal states built from them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .pauli import SITES, Site, projector_stack

FULL_MASK = (1 << 16) - 1
_CROSSES = ("×", "x", "X")


@dataclass(frozen=True, order=True)
class LatticeSubset:
    """Subset I of the 4x4 lattice as a 16-bit mask; site (a, b) is bit 4*a + b."""

    mask: int

    def __post_init__(self):
        if not 0 <= self.mask <= FULL_MASK:
            raise ValueError(f"mask out of range: {self.mask}")

    @classmethod
    def from_sites(cls, sites: Iterable) -> "LatticeSubset":
        mask = 0
        for s in sites:
            mask |= 1 << Site.of(s).bit
        return cls(mask)

    @property
    def sites(self) -> list[Site]:
        return [s for s in SITES if self.mask >> s.bit & 1]

    @property
    def n(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, site) -> bool:
        return bool(self.mask >> Site.of(site).bit & 1)

    def __len__(self) -> int:
        return self.n

    def indicator(self) -> np.ndarray:
        """4x4 0/1 array indexed [alpha, beta]."""
        return ((self.mask >> np.arange(16)) & 1).reshape(4, 4)

    def to_json(self) -> list[list[int]]:
        return [[s.col, s.row] for s in self.sites]

    @classmethod
    def from_json(cls, data) -> "LatticeSubset":
        return cls.from_sites(tuple(p) for p in data)

    def __str__(self) -> str:
        return "{" + ", ".join(f"({s.col},{s.row})" for s in self.sites) + "}"


def masks_to_bits(masks) -> np.ndarray:
    """(n,) integer masks -> (n, 16) 0/1 array."""
    masks = np.asarray(masks, dtype=np.int64)
    return ((masks[..., None] >> np.arange(16)) & 1).astype(np.int8)


def validate_weights(pi, tol: float = 1e-12) -> np.ndarray:
    """Return ``pi`` as a (4, 4) float array indexed [alpha, beta] after checking it."""
    pi = np.asarray(pi, dtype=float).reshape(4, 4)
    if np.any(pi < 0):
        raise ValueError("weights must be nonnegative")
    if abs(pi.sum() - 1) > tol:
        raise ValueError(f"weights sum to {pi.sum()!r}, not 1")
    return pi


@dataclass(frozen=True, eq=False)
class LatticeState:
    """rho_pi = sum over sites of pi[a, b] P_ab."""

    weights: np.ndarray = field(repr=False)

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.tensordot(self.weights.reshape(16), projector_stack(), axes=1)

    @property
    def support(self) -> LatticeSubset:
        return LatticeSubset(int(sum(1 << k for k, w in enumerate(self.weights.reshape(16)) if w > 0)))


def weighted_state(pi) -> LatticeState:
    return LatticeState(validate_weights(pi))


def uniform_weights(subset: LatticeSubset) -> np.ndarray:
    if subset.n == 0:
        raise ValueError("empty lattice subset")
    return subset.indicator() / subset.n


def lattice_state(subset: LatticeSubset) -> LatticeState:
    return LatticeState(uniform_weights(subset))


def lattice_state_matrices(masks) -> np.ndarray:
    """Stack of rho_I for many masks at once, shape (n, 16, 16)."""
    bits = masks_to_bits(masks).astype(float)
    counts = bits.sum(axis=1)
    if np.any(counts == 0):
        raise ValueError("empty lattice subset")
    return np.tensordot(bits / counts[:, None], projector_stack(), axes=1)


def render_grid(subset: LatticeSubset, mark: str = "×") -> str:
    """Text drawing with row 3 on top and column 0 on the left."""
    lines = []
    for row in range(3, -1, -1):
        cells = (mark if (col, row) in subset else " " for col in range(4))
        lines.append(f"{row} |" + "|".join(f" {c} " for c in cells) + "|")
    lines.append("   " + " ".join(f" {c} " for c in range(4)))
    return "\n".join(lines)


def parse_grid(text: str) -> LatticeSubset:
    """Inverse of :func:`render_grid`; accepts '×' or 'x' as the mark."""
    sites = []
    rows_seen = set()
    for line in text.splitlines():
        label, sep, rest = line.partition("|")
        if not sep or not label.strip().isdigit():
            continue
        row = int(label)
        if row in rows_seen:
            raise ValueError(f"row {row} appears twice")
        rows_seen.add(row)
        cells = rest.rstrip().rstrip("|").split("|")
        if len(cells) != 4:
            raise ValueError(f"row {row} has {len(cells)} cells, expected 4")
        for col, cell in enumerate(cells):
            c = cell.strip()
            if c in _CROSSES:
                sites.append((col, row))
            elif c:
                raise ValueError(f"unexpected cell content {c!r}")
    if rows_seen != {0, 1, 2, 3}:
        raise ValueError("grid must label rows 0..3")
    return LatticeSubset.from_sites(sites)
