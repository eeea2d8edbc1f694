"""Separability certificates for lattice states.

Certificates come in five kinds:

RANK4_RULE
    PPT states of rank at most 4 on C^4 (x) C^4 are separable. This is a
    literature result taken as an axiom; no decomposition is constructed.
ISOTROPIC15
    N_I = 15 states are isotropic states (1 - P)/15 with fidelity 0.
RHO6_EXPLICIT
    an explicit 12-member product ensemble for
    rho_6 = (P00 + P01 + P02 + P30 + P31 + P32)/6, transported to the rest of
    its orbit by the realizing local unitaries.
RANK14_CONVEX
    N_I = 14 states split into two rank-4 pieces and one rho_6-class piece.
ENSEMBLE
    an explicit product ensemble; used for the maximally mixed N_I = 16 state.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .equivalence import DEFAULT_GROUP, EquivalenceOp, canonical_form, find_op
from .linalg import as_matrix
from .pauli import SITES, basis_projector
from .ppt import ppt_combinatorial
from .states import LatticeSubset, lattice_state

RHO6_SITES = ((0, 0), (0, 1), (0, 2), (3, 0), (3, 1), (3, 2))
RHO6 = LatticeSubset.from_sites(RHO6_SITES)
RHO15 = LatticeSubset((1 << 16) - 1 - 1)  # every site but (0, 0)

# the three pieces of the rank-14 representative (holes at (2,3) and (3,3))
RANK14_REP = LatticeSubset.from_sites(
    [(a, b) for a in range(4) for b in range(4) if (a, b) not in ((2, 3), (3, 3))])
RANK14_PIECES = (
    LatticeSubset.from_sites([(0, 0), (1, 0), (0, 1), (1, 1)]),                   # diamonds
    LatticeSubset.from_sites([(0, 2), (1, 2), (0, 3), (1, 3)]),                   # circles
    LatticeSubset.from_sites([(2, 0), (3, 0), (2, 1), (3, 1), (2, 2), (3, 2)]),   # crosses
)


class CertificateKind(str, enum.Enum):
    RANK4_RULE = "RANK4_RULE"
    ISOTROPIC15 = "ISOTROPIC15"
    RHO6_EXPLICIT = "RHO6_EXPLICIT"
    RANK14_CONVEX = "RANK14_CONVEX"
    ENSEMBLE = "ENSEMBLE"


@dataclass(frozen=True, eq=False)
class ProductEnsemble:
    """sum_i w_i |a_i><a_i| (x) |b_i><b_i| with unit vectors a_i, b_i in C^4."""

    weights: np.ndarray
    factors: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        factors = tuple((np.asarray(a, complex), np.asarray(b, complex)) for a, b in self.factors)
        if len(w) != len(factors):
            raise ValueError("one weight per factor pair")
        if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
            raise ValueError("weights must be a probability vector")
        for a, b in factors:
            if abs(np.linalg.norm(a) - 1) > 1e-12 or abs(np.linalg.norm(b) - 1) > 1e-12:
                raise ValueError("factor vectors must have unit norm")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "factors", factors)

    def __len__(self) -> int:
        return len(self.factors)

    def matrix(self) -> np.ndarray:
        out = 0
        for w, (a, b) in zip(self.weights, self.factors):
            v = np.kron(a, b)
            out = out + w * np.outer(v, v.conj())
        return out

    def transported(self, op: EquivalenceOp) -> "ProductEnsemble":
        """Ensemble for the image state under the local unitaries realizing ``op``."""
        u, w = op.unitaries()
        return ProductEnsemble(self.weights, tuple((u.conj() @ a, w @ b) for a, b in self.factors))

    def to_json(self) -> dict:
        pair = lambda v: [[float(z.real), float(z.imag)] for z in v]
        return {"weights": self.weights.tolist(), "factors": [[pair(a), pair(b)] for a, b in self.factors]}

    @classmethod
    def from_json(cls, data: dict) -> "ProductEnsemble":
        unpair = lambda v: np.array([complex(re, im) for re, im in v])
        return cls(np.array(data["weights"]), tuple((unpair(a), unpair(b)) for a, b in data["factors"]))


def schmidt_rank(v, d_a: int = 4, d_b: int = 4, tol: float = 1e-10) -> int:
    s = np.linalg.svd(np.asarray(v).reshape(d_a, d_b), compute_uv=False)
    return int(np.sum(s > tol))


def verify_ensemble(rho, e: ProductEnsemble, tol: float = 1e-10) -> bool:
    rho = as_matrix(rho)
    if any(a.shape != (4,) or b.shape != (4,) for a, b in e.factors):
        return False
    if rho.shape != (16, 16):
        return False
    return bool(np.max(np.abs(e.matrix() - rho)) <= tol)


def rho6_ensemble() -> ProductEnsemble:
    k00, k01, k10, k11 = np.eye(4, dtype=complex)
    r = math.sqrt(2)
    vecs = []
    for lo, hi in ((k00, k01), (k10, k11)):
        for s in (1, -1):
            vecs.append(((lo + s * hi) / r, (lo + s * hi) / r))
    for lo, hi in ((k00, k01), (k10, k11)):
        for s in (1, -1):
            vecs.append(((lo + s * 1j * hi) / r, (lo - s * 1j * hi) / r))
    vecs += [(k00, k01), (k01, k00), (k10, k11), (k11, k10)]
    return ProductEnsemble(np.full(12, 1 / 12), tuple(vecs))


def maximally_mixed_ensemble() -> ProductEnsemble:
    basis = np.eye(4, dtype=complex)
    return ProductEnsemble(np.full(16, 1 / 16), tuple((basis[i], basis[j]) for i in range(4) for j in range(4)))


@dataclass(frozen=True, eq=False)
class SeparabilityCertificate:
    kind: CertificateKind
    payload: dict = field(default_factory=dict)
    ensemble: ProductEnsemble | None = None
    pieces: tuple = ()

    def to_json(self) -> dict:
        d = {"kind": self.kind.value, **self.payload}
        if self.ensemble is not None:
            d["ensemble"] = self.ensemble.to_json()
        if self.pieces:
            d["pieces"] = [{"subset": p.to_json(), "weight": w, "certificate": c.to_json()}
                           for p, w, c in self.pieces]
        return d


def _rank4(subset: LatticeSubset) -> SeparabilityCertificate:
    return SeparabilityCertificate(CertificateKind.RANK4_RULE, {"rank": subset.n, "basis": "literature-backed"})


def separability_certificate(subset: LatticeSubset, group: str = DEFAULT_GROUP) -> SeparabilityCertificate | None:
    if subset.n == 0:
        raise ValueError("empty lattice subset")
    if not ppt_combinatorial(subset):
        return None
    n = subset.n
    if n <= 4:
        return _rank4(subset)
    if n == 15:
        hole = next(s for s in SITES if s not in subset)
        rho = lattice_state(subset).matrix
        fidelity = float(np.real(np.trace(rho @ basis_projector(hole))))
        if fidelity > 0.25 + 1e-12:
            return None
        return SeparabilityCertificate(CertificateKind.ISOTROPIC15,
                                       {"fidelity": fidelity, "missing": [hole.col, hole.row]})
    if n == 16:
        return SeparabilityCertificate(CertificateKind.ENSEMBLE, {}, maximally_mixed_ensemble())
    if n == 6 and canonical_form(subset, group) == canonical_form(RHO6, group):
        op = find_op(RHO6, subset, group)
        ens = rho6_ensemble().transported(op)
        if not verify_ensemble(lattice_state(subset).matrix, ens):
            raise RuntimeError(f"transported rho_6 ensemble fails for {subset}")
        return SeparabilityCertificate(CertificateKind.RHO6_EXPLICIT, {"op": list(op.perm)}, ens)
    if n == 14:
        op = find_op(RANK14_REP, subset, group)
        if op is None:
            return None
        pieces = []
        for piece in RANK14_PIECES:
            image = op(piece)
            cert = separability_certificate(image, group)
            if cert is None:
                raise RuntimeError(f"rank-14 piece {image} is not certified")
            pieces.append((image, image.n / 14, cert))
        return SeparabilityCertificate(CertificateKind.RANK14_CONVEX, {"op": list(op.perm)}, pieces=tuple(pieces))
    return None
