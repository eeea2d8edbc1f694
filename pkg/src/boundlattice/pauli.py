"""Pauli tensor basis on C^4 and the maximally entangled basis of C^4 (x) C^4.

Conventions
-----------
* C^4 = C^2 (x) C^2 with basis |00>, |01>, |10>, |11> in that order.
* A lattice site is ``(alpha, beta)``: ``alpha`` labels the column and acts on
  the first qubit, ``beta`` labels the row and acts on the second qubit, so
  ``sigma_ab((alpha, beta)) = pauli(alpha) (x) pauli(beta)``.
* ``|Psi_ab> = (1_4 (x) sigma_ab) |Psi_+^4>``; no extra phases.
"""
from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .linalg import kron

_PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def check_index(alpha: int) -> int:
    a = int(alpha)
    if a != alpha or not 0 <= a <= 3:
        raise ValueError(f"Pauli index must be in 0..3, got {alpha!r}")
    return a


class Site(NamedTuple):
    """Lattice point (column alpha, row beta)."""

    col: int
    row: int

    @classmethod
    def of(cls, site) -> "Site":
        col, row = site
        return cls(check_index(col), check_index(row))

    @property
    def bit(self) -> int:
        return 4 * self.col + self.row


SITES: tuple[Site, ...] = tuple(Site(a, b) for a in range(4) for b in range(4))


def pauli(alpha: int) -> np.ndarray:
    return _PAULIS[check_index(alpha)].copy()


def epsilon(alpha: int) -> int:
    """Sign with pauli(alpha).T == epsilon(alpha) * pauli(alpha)."""
    return -1 if check_index(alpha) == 2 else 1


def xi(alpha: int, gamma: int) -> int:
    return -1 if abs(check_index(alpha) - check_index(gamma)) == 2 else 1


def eta(alpha: int, gamma: int) -> int:
    """Sign with sigma_alpha sigma_gamma sigma_alpha == eta * sigma_gamma."""
    alpha, gamma = check_index(alpha), check_index(gamma)
    return 1 if alpha == 0 or gamma == 0 or alpha == gamma else -1


XI = np.array([[xi(a, g) for g in range(4)] for a in range(4)])


def sigma_ab(site) -> np.ndarray:
    s = Site.of(site)
    return np.kron(_PAULIS[s.col], _PAULIS[s.row])


def psi_plus(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError("dimension must be at least 2")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1 / np.sqrt(d)
    return v


def p_plus(d: int) -> np.ndarray:
    v = psi_plus(d)
    return np.outer(v, v.conj())


def basis_vector(site) -> np.ndarray:
    return np.kron(np.eye(4), sigma_ab(site)) @ psi_plus(4)


@lru_cache(maxsize=None)
def _projector_stack() -> np.ndarray:
    stack = np.empty((16, 16, 16), dtype=complex)
    for s in SITES:
        v = basis_vector(s)
        stack[s.bit] = np.outer(v, v.conj())
    stack.flags.writeable = False
    return stack


def projector_stack() -> np.ndarray:
    """Read-only array of shape (16, 16, 16); entry ``[4*alpha + beta]`` is P_ab."""
    return _projector_stack()


def basis_projector(site) -> np.ndarray:
    return _projector_stack()[Site.of(site).bit].copy()


def bell_basis() -> np.ndarray:
    """Unitary whose column ``4*alpha + beta`` is |Psi_ab>."""
    return np.stack([basis_vector(s) for s in SITES], axis=1)


def flip_v(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError("dimension must be at least 2")
    v = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            v[b * d + a, a * d + b] = 1
    return v


def v_ab(site) -> np.ndarray:
    u = kron(np.eye(4), sigma_ab(site))
    return u @ flip_v(4) @ u


def v_ab_spectral(site) -> np.ndarray:
    """Sum over (g, d) of xi(alpha, g) xi(beta, d) P_gd."""
    s = Site.of(site)
    coeffs = np.array([XI[s.col, t.col] * XI[s.row, t.row] for t in SITES], dtype=float)
    return np.tensordot(coeffs, _projector_stack(), axes=1)
