"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Nothing here is
larger than 256x256, so everything is dense.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order with matching orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def as_matrix(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices (left to right)."""
    return reduce(np.kron, (as_matrix(m) for m in mats))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = as_matrix(a)
    return a.shape[0] == a.shape[1] and bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def _require_hermitian(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a):
        raise ValueError("matrix is not Hermitian within tolerance")


def partial_transpose(rho, dim_a: int, dim_b: int, subsystem: str = "first") -> np.ndarray:
    """Transpose one tensor factor of an operator on C^dim_a (x) C^dim_b.

    ``subsystem`` is ``"first"`` or ``"second"``.
    """
    rho = as_matrix(rho)
    n = dim_a * dim_b
    if rho.shape[-2:] != (n, n):
        raise ValueError(f"operator of shape {rho.shape[-2:]} does not act on {dim_a}x{dim_b}")
    lead = rho.shape[:-2]
    t = rho.reshape(*lead, dim_a, dim_b, dim_a, dim_b)
    k = len(lead)
    axes = list(range(k))
    if subsystem == "first":
        axes += [k + 2, k + 1, k, k + 3]
    elif subsystem == "second":
        axes += [k, k + 3, k + 2, k + 1]
    else:
        raise ValueError(f"subsystem must be 'first' or 'second', not {subsystem!r}")
    return t.transpose(axes).reshape(*lead, n, n)


def hermitian_eigen(a) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    a = as_matrix(a)
    _require_hermitian(a)
    # symmetrize away round-off before handing to LAPACK
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    order = np.argsort(w)[::-1]
    return Spectrum(w[order], v[:, order])


def eigvalsh(a) -> np.ndarray:
    """Eigenvalues (descending) of a Hermitian matrix or a stack of them."""
    a = as_matrix(a)
    w = np.linalg.eigvalsh((a + np.swapaxes(a, -1, -2).conj()) / 2)
    return w[..., ::-1]


def min_eigenvalue(a) -> float:
    a = as_matrix(a)
    _require_hermitian(a)
    return float(eigvalsh(a)[-1])


def is_psd(a, tol: float = PSD_TOL) -> bool:
    """True iff the smallest eigenvalue of Hermitian ``a`` is >= -tol."""
    return min_eigenvalue(a) >= -tol


def operator_norm(a) -> float:
    """Largest singular value, via the spectrum of a^dagger a."""
    a = as_matrix(a)
    return float(np.sqrt(max(eigvalsh(a.conj().T @ a)[0], 0.0)))


def max_abs(a) -> float:
    return float(np.max(np.abs(as_matrix(a)), initial=0.0))
