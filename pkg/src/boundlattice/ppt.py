"""Positivity under partial transposition for lattice states.

Three independent routes:

* :func:`ppt_combinatorial` counts lattice members in rows and columns;
* :func:`pt_spectrum_closed_form` evaluates the Bell-diagonal spectrum of the
  partially transposed state from the weights;
* :func:`ppt_spectral` builds the 16x16 matrix, transposes the first factor and
  diagonalizes it.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .linalg import PSD_TOL, eigvalsh, partial_transpose
from .pauli import XI, Site
from .states import LatticeState, LatticeSubset, lattice_state_matrices, masks_to_bits


class QCounts(NamedTuple):
    q1: float  # column weight, the site's own row excluded
    q2: float  # row weight, the site's own column excluded


def tilde(site) -> Site:
    s = Site.of(site)
    return Site((s.col + 2) % 4, (s.row + 2) % 4)


def q_counts(pi, site) -> QCounts:
    pi = np.asarray(pi, dtype=float).reshape(4, 4)
    g, d = Site.of(site)
    q1 = pi[g, :].sum() - pi[g, d]
    q2 = pi[:, d].sum() - pi[g, d]
    return QCounts(float(q1), float(q2))


def _line_counts(ind: np.ndarray) -> np.ndarray:
    """For each site, members in its column plus its row, the site itself excluded."""
    col = ind.sum(axis=-1, keepdims=True)
    row = ind.sum(axis=-2, keepdims=True)
    return col + row - 2 * ind


def ppt_combinatorial(subset: LatticeSubset) -> bool:
    if subset.n == 0:
        raise ValueError("empty lattice subset")
    return bool(np.all(2 * _line_counts(subset.indicator()) <= subset.n))


def ppt_combinatorial_masks(masks) -> np.ndarray:
    """Vectorized :func:`ppt_combinatorial` over an array of nonzero masks."""
    ind = masks_to_bits(masks).reshape(-1, 4, 4).astype(np.int64)
    n = ind.sum(axis=(1, 2))
    if np.any(n == 0):
        raise ValueError("empty lattice subset")
    return np.all(2 * _line_counts(ind) <= n[:, None, None], axis=(1, 2))


def pt_spectrum_closed_form(pi) -> np.ndarray:
    """Eigenvalues of (T_4 (x) id_4)[rho_pi], as a (4, 4) array indexed by the
    Bell label (g, d) of the eigenvector P_gd."""
    pi = np.asarray(pi, dtype=float).reshape(4, 4)
    out = np.empty((4, 4))
    for g in range(4):
        for d in range(4):
            q = q_counts(pi, tilde((g, d)))
            out[g, d] = 0.25 * (1 - 2 * (q.q1 + q.q2))
    return out


def pt_spectrum_xi_sum(pi) -> np.ndarray:
    """Same spectrum written as (1/4) sum_ab pi_ab xi_ag xi_bd."""
    pi = np.asarray(pi, dtype=float).reshape(4, 4)
    return 0.25 * XI.T @ pi @ XI


def partial_transpose_state(state: LatticeState, subsystem: str = "first") -> np.ndarray:
    return partial_transpose(state.matrix, 4, 4, subsystem)


def ppt_spectral(state: LatticeState, tol: float = PSD_TOL) -> bool:
    return bool(eigvalsh(partial_transpose_state(state))[-1] >= -tol)


def pt_min_eigenvalues(masks, chunk: int = 4096) -> np.ndarray:
    """Smallest eigenvalue of rho_I^{T_1} for every mask, by brute-force diagonalization."""
    masks = np.asarray(masks, dtype=np.int64)
    out = np.empty(len(masks))
    for start in range(0, len(masks), chunk):
        rho = lattice_state_matrices(masks[start:start + chunk])
        out[start:start + chunk] = eigvalsh(partial_transpose(rho, 4, 4, "first"))[:, -1]
    return out
