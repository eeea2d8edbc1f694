"""Local-unitary relabelings of lattice subsets.

A pair of 4x4 unitaries (U, W) with W sigma_ab U^dagger proportional to
sigma_cd for every site induces a bijection of the lattice, and

    (U* (x) W) rho_I (U^T (x) W^dagger) = rho_{I'}

where I' is the image of I. Writing each Pauli label as a vector in F_2^2
(I=00, X=10, Y=11, Z=01) and a site as a vector in F_2^4, the induced
bijections are exactly the affine symplectic maps: a two-qubit Clifford for
the linear part and a Pauli translation. That group has 16 * 720 = 11520
elements.

Two groups are exposed:

``"lattice"``
    independent permutations of the column labels and of the row labels,
    plus the flip (a, b) -> (b, a); order 2 * 24 * 24 = 1152.
``"full"``
    the whole affine symplectic group above, which also contains relabelings
    mixing rows and columns (from CNOT between the two qubits of C^4).

Every element carries the unitaries that realize it, so the orbit machinery
never relies on an unverified relabeling.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .pauli import SITES, Site, pauli, sigma_ab
from .states import FULL_MASK, LatticeSubset

GROUPS = ("full", "lattice")
DEFAULT_GROUP = "full"

_BIT_WEIGHTS = np.int64(1) << np.arange(16, dtype=np.int64)


@dataclass(frozen=True)
class EquivalenceOp:
    """Site bijection; ``perm[k]`` is the bit index of the image of site bit ``k``."""

    perm: tuple

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(16)):
            raise ValueError("perm must be a permutation of 0..15")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls) -> "EquivalenceOp":
        return cls(tuple(range(16)))

    @classmethod
    def from_perms(cls, col_perm: Sequence[int] = (0, 1, 2, 3), row_perm: Sequence[int] = (0, 1, 2, 3),
                   flip: bool = False) -> "EquivalenceOp":
        """(a, b) -> (col_perm[a], row_perm[b]), followed by the flip when requested."""
        if sorted(col_perm) != [0, 1, 2, 3] or sorted(row_perm) != [0, 1, 2, 3]:
            raise ValueError("column and row permutations must be bijections of 0..3")
        perm = []
        for s in SITES:
            c, r = col_perm[s.col], row_perm[s.row]
            if flip:
                c, r = r, c
            perm.append(4 * c + r)
        return cls(tuple(perm))

    def site(self, site) -> Site:
        k = self.perm[Site.of(site).bit]
        return Site(k // 4, k % 4)

    def apply_mask(self, mask: int) -> int:
        out = 0
        for k in range(16):
            if mask >> k & 1:
                out |= 1 << self.perm[k]
        return out

    def __call__(self, subset: LatticeSubset) -> LatticeSubset:
        return LatticeSubset(self.apply_mask(subset.mask))

    def then(self, other: "EquivalenceOp") -> "EquivalenceOp":
        """Apply ``self`` first, then ``other``."""
        return EquivalenceOp(tuple(other.perm[p] for p in self.perm))

    def inverse(self) -> "EquivalenceOp":
        inv = [0] * 16
        for k, p in enumerate(self.perm):
            inv[p] = k
        return EquivalenceOp(tuple(inv))

    def unitaries(self) -> tuple[np.ndarray, np.ndarray]:
        """(U, W) realizing this relabeling; raises if it is not a local-unitary relabeling."""
        try:
            u, w = _group("full")[1][self.perm]
        except KeyError:
            raise ValueError("relabeling is not induced by local unitaries") from None
        return u.copy(), w.copy()

    def is_lattice_op(self) -> bool:
        return self.perm in _group("lattice")[1]


def apply_op(subset: LatticeSubset, op: EquivalenceOp) -> LatticeSubset:
    return op(subset)


# --- group construction ------------------------------------------------------

def relabeling_of(u, w) -> tuple:
    """Site permutation induced by the unitary pair (U, W)."""
    sig = [sigma_ab(s) for s in SITES]
    perm = []
    for s in sig:
        m = w @ s @ np.conj(u).T
        overlaps = [abs(np.trace(t.conj().T @ m)) / 4 for t in sig]
        k = int(np.argmax(overlaps))
        if abs(overlaps[k] - 1) > 1e-9:
            raise ValueError("unitary pair does not map Pauli products to Pauli products")
        perm.append(k)
    return tuple(perm)


def _generators(group: str) -> list[tuple[np.ndarray, np.ndarray]]:
    one = np.eye(2)
    had = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    phase = np.diag([1, 1j])
    eye4 = np.eye(4, dtype=complex)
    gens = []
    for a in (1, 3):
        gens.append((eye4, np.kron(pauli(a), one)))
        gens.append((eye4, np.kron(one, pauli(a))))
    for c in (np.kron(had, one), np.kron(phase, one), np.kron(one, had), np.kron(one, phase)):
        gens.append((c, c))
    swap = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    gens.append((swap, swap))
    if group == "full":
        cnot = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
        gens.append((cnot, cnot))
    elif group != "lattice":
        raise ValueError(f"unknown group {group!r}; choose from {GROUPS}")
    return gens


@lru_cache(maxsize=None)
def _group(group: str) -> tuple[np.ndarray, dict]:
    gens = [(relabeling_of(u, w), (np.asarray(u, complex), np.asarray(w, complex)))
            for u, w in _generators(group)]
    start = tuple(range(16))
    elements = {start: (np.eye(4, dtype=complex), np.eye(4, dtype=complex))}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        u, w = elements[p]
        for gp, (gu, gw) in gens:
            q = tuple(gp[i] for i in p)
            if q not in elements:
                elements[q] = (gu @ u, gw @ w)
                queue.append(q)
    perms = np.array(sorted(elements), dtype=np.int64)
    perms.flags.writeable = False
    return perms, elements


def group_perms(group: str = DEFAULT_GROUP) -> np.ndarray:
    """All site permutations of the group, shape (order, 16)."""
    return _group(group)[0]


def group_ops(group: str = DEFAULT_GROUP) -> list[EquivalenceOp]:
    return [EquivalenceOp(tuple(p)) for p in group_perms(group)]


def group_order(group: str = DEFAULT_GROUP) -> int:
    return len(group_perms(group))


# --- orbits ------------------------------------------------------------------

def _images(mask: int, group: str) -> np.ndarray:
    """Image mask under every group element, aligned with :func:`group_perms`."""
    bits = (mask >> np.arange(16)) & 1
    return (bits[None, :] * (np.int64(1) << group_perms(group))).sum(axis=1)


def orbit_masks(mask: int, group: str = DEFAULT_GROUP) -> np.ndarray:
    return np.unique(_images(mask, group))


def orbit(subset: LatticeSubset, group: str = DEFAULT_GROUP) -> list[LatticeSubset]:
    return [LatticeSubset(int(m)) for m in orbit_masks(subset.mask, group)]


def canonical_form(subset: LatticeSubset, group: str = DEFAULT_GROUP) -> LatticeSubset:
    """Smallest mask in the orbit."""
    return LatticeSubset(int(_images(subset.mask, group).min()))


def find_op(src: LatticeSubset, dst: LatticeSubset, group: str = DEFAULT_GROUP) -> EquivalenceOp | None:
    """Some group element mapping ``src`` onto ``dst``, or None."""
    hits = np.flatnonzero(_images(src.mask, group) == dst.mask)
    if len(hits) == 0:
        return None
    return EquivalenceOp(tuple(group_perms(group)[hits[0]]))


@lru_cache(maxsize=None)
def _orbit_table(group: str) -> tuple[np.ndarray, np.ndarray]:
    canon = np.full(FULL_MASK + 1, -1, dtype=np.int64)
    size = np.zeros(FULL_MASK + 1, dtype=np.int64)
    for m in range(FULL_MASK + 1):
        if canon[m] >= 0:
            continue
        members = orbit_masks(m, group)
        canon[members] = members.min()
        size[members] = len(members)
    canon.flags.writeable = False
    size.flags.writeable = False
    return canon, size


def orbit_table(group: str = DEFAULT_GROUP) -> tuple[np.ndarray, np.ndarray]:
    """(canonical mask, orbit size) for every mask 0..65535."""
    return _orbit_table(group)


def canonical_forms(group: str = DEFAULT_GROUP, n: Iterable[int] | None = None) -> list[LatticeSubset]:
    canon, _ = orbit_table(group)
    reps = sorted(set(int(c) for c in canon[1:]))
    if n is not None:
        wanted = set(n)
        reps = [r for r in reps if bin(r).count("1") in wanted]
    return [LatticeSubset(r) for r in reps]
