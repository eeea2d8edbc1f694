"""Linear maps on d x d matrices and the dynamical semigroups built from them.

Maps are stored as superoperators acting on column-stacked vectorizations, so
``vec(A @ X @ B) == kron(B.T, A) @ vec(X)`` and composition is a matrix product.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import PSD_TOL, as_matrix, eigvalsh, hermitian_eigen, is_hermitian, operator_norm
from .pauli import pauli, epsilon, p_plus


def vec(x) -> np.ndarray:
    return as_matrix(x).T.reshape(-1)


def unvec(v, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d).T


@dataclass(frozen=True, eq=False)
class SuperOperator:
    dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.dim ** 2, self.dim ** 2):
            raise ValueError(f"superoperator on {self.dim}x{self.dim} needs shape {(self.dim ** 2,) * 2}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, d: int) -> "SuperOperator":
        return cls(d, np.eye(d * d, dtype=complex))

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], d: int) -> "SuperOperator":
        """Tabulate a linear map by its action on the matrix units."""
        cols = []
        for j in range(d):
            for i in range(d):  # column-stacking order: index i + d*j
                e = np.zeros((d, d), dtype=complex)
                e[i, j] = 1
                cols.append(vec(f(e)))
        return cls(d, np.stack(cols, axis=1))

    def __call__(self, x) -> np.ndarray:
        return unvec(self.matrix @ vec(x), self.dim)

    def compose(self, other: "SuperOperator") -> "SuperOperator":
        """``self`` after ``other``."""
        _same_dim(self, other)
        return SuperOperator(self.dim, self.matrix @ other.matrix)

    def __matmul__(self, other: "SuperOperator") -> "SuperOperator":
        return self.compose(other)

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        _same_dim(self, other)
        return SuperOperator(self.dim, self.matrix + other.matrix)

    def __sub__(self, other: "SuperOperator") -> "SuperOperator":
        _same_dim(self, other)
        return SuperOperator(self.dim, self.matrix - other.matrix)

    def __mul__(self, c) -> "SuperOperator":
        return SuperOperator(self.dim, c * self.matrix)

    __rmul__ = __mul__

    def tensor(self, other: "SuperOperator") -> "SuperOperator":
        """The map A (x) B -> self[A] (x) other[B] on (d1*d2) x (d1*d2) matrices."""
        d1, d2 = self.dim, other.dim
        # matrix units of the product space factor as E_ac (x) E_bd
        t = np.einsum("ACac,BDbd->ABCDabcd",
                      self.matrix.reshape(d1, d1, d1, d1).transpose(1, 0, 3, 2),
                      other.matrix.reshape(d2, d2, d2, d2).transpose(1, 0, 3, 2))
        # t[A,B,C,D,a,b,c,d] = <E_(AB),(CD) | map(E_(ab),(cd))>; rearrange into column-stacked order
        d = d1 * d2
        t = t.reshape(d, d, d, d)  # [row_out, col_out, row_in, col_in]
        return SuperOperator(d, t.transpose(1, 0, 3, 2).reshape(d * d, d * d))

    def dual(self) -> "SuperOperator":
        """Map with Tr(self[X] rho) == Tr(X dual[rho]) for all X, rho."""
        d = self.dim
        # Tr(A B) = vec(A.T) . vec(B); the transpose on vec is a fixed permutation
        swap = np.zeros((d * d, d * d))
        for i in range(d):
            for j in range(d):
                swap[i + d * j, j + d * i] = 1
        return SuperOperator(d, swap @ self.matrix.T @ swap)

    def choi(self) -> np.ndarray:
        return choi(self)


def _same_dim(a: SuperOperator, b: SuperOperator) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def superop_conj(a, b=None) -> SuperOperator:
    """Superoperator of X -> a X b (b defaults to a^dagger)."""
    a = as_matrix(a)
    b = a.conj().T if b is None else as_matrix(b)
    return SuperOperator(a.shape[0], np.kron(b.T, a))


@dataclass(frozen=True, eq=False)
class KrausSet:
    operators: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(g) for g in self.operators)
        if not ops:
            raise ValueError("empty Kraus set")
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1] or any(g.shape != shape for g in ops):
            raise ValueError("Kraus operators must be square and of equal size")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def is_trace_preserving(self, tol: float = 1e-10) -> bool:
        s = sum(g.conj().T @ g for g in self.operators)
        return bool(np.max(np.abs(s - np.eye(self.dim))) <= tol)


def superop_from_kraus(ks: KrausSet | Sequence) -> SuperOperator:
    if not isinstance(ks, KrausSet):
        ks = KrausSet(tuple(ks))
    return SuperOperator(ks.dim, sum(np.kron(g.conj(), g) for g in ks.operators))


def choi(m: SuperOperator) -> np.ndarray:
    """(id_d (x) m)[P_+^d]."""
    d = m.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            out += np.kron(e, m(e))
    return out / d


def choi_eigenvalues(m: SuperOperator) -> np.ndarray:
    return eigvalsh(choi(m))


def is_cp(m: SuperOperator, tol: float = PSD_TOL) -> bool:
    return bool(choi_eigenvalues(m)[-1] >= -tol)


def is_trace_preserving(m: SuperOperator, tol: float = 1e-10) -> bool:
    d = m.dim
    # Tr X = vec(1) . vec(X); trace preservation means vec(1)^T M = vec(1)^T
    one = vec(np.eye(d))
    return bool(np.max(np.abs(one @ m.matrix - one)) <= tol)


# --- the standard qubit maps -------------------------------------------------

def identity_map(d: int) -> SuperOperator:
    return SuperOperator.identity(d)


def transpose_map(d: int) -> SuperOperator:
    return SuperOperator.from_function(lambda x: x.T, d)


def pauli_conj(alpha: int) -> SuperOperator:
    """S_alpha: rho -> sigma_alpha rho sigma_alpha."""
    return superop_conj(pauli(alpha))


def trace_map_2() -> SuperOperator:
    """Tr_2 = (1/2) sum_alpha S_alpha, i.e. rho -> Tr(rho) 1_2."""
    return 0.5 * sum((pauli_conj(a) for a in range(1, 4)), pauli_conj(0))


def transpose_map_2() -> SuperOperator:
    """T_2 = (1/2) sum_alpha epsilon_alpha S_alpha."""
    return 0.5 * sum((epsilon(a) * pauli_conj(a) for a in range(1, 4)), pauli_conj(0))


# --- Hermitian decomposition and the single-negative-eigenvalue criterion ----

def pauli_operator_basis() -> list[np.ndarray]:
    """F_0 = 1/sqrt2, F_k = sigma_k/sqrt2: orthonormal, F_k traceless for k >= 1."""
    return [pauli(a) / math.sqrt(2) for a in range(4)]


def check_operator_basis(basis: Sequence[np.ndarray], tol: float = 1e-10) -> None:
    basis = [as_matrix(f) for f in basis]
    d = basis[0].shape[0]
    gram = np.array([[np.trace(f.conj().T @ g) for g in basis] for f in basis])
    if np.max(np.abs(gram - np.eye(len(basis)))) > tol:
        raise ValueError("operator basis is not orthonormal")
    if np.max(np.abs(basis[0] - np.eye(d) / math.sqrt(d))) > tol:
        raise ValueError("first basis element must be the normalized identity")
    if any(abs(np.trace(f)) > tol for f in basis[1:]):
        raise ValueError("basis elements after the first must be traceless")


@dataclass(frozen=True, eq=False)
class HermDecomposition:
    """Lambda[rho] = sum_j l_j G_j rho G_j^dagger with Tr(G_i^dagger G_j) = delta_ij."""

    eigenvalues: np.ndarray
    operators: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(g) for g in self.operators)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues, dtype=float))
        if len(ops) != len(self.eigenvalues):
            raise ValueError("need one operator per eigenvalue")
        gram = np.array([[np.trace(a.conj().T @ b) for b in ops] for a in ops])
        if np.max(np.abs(gram - np.eye(len(ops)))) > 1e-10:
            raise ValueError("operators are not orthonormal")

    @property
    def norms(self) -> np.ndarray:
        return np.array([operator_norm(g) for g in self.operators])

    def superop(self) -> SuperOperator:
        d = self.operators[0].shape[0]
        return SuperOperator(d, sum(l * np.kron(g.conj(), g) for l, g in zip(self.eigenvalues, self.operators)))


def coefficient_matrix(m: SuperOperator, basis: Sequence[np.ndarray]) -> np.ndarray:
    """[lambda_ki] with m[rho] = sum_ki lambda_ki F_k rho F_i^dagger."""
    basis = [as_matrix(f) for f in basis]
    n = len(basis)
    lam = np.empty((n, n), dtype=complex)
    for k, fk in enumerate(basis):
        for i, fi in enumerate(basis):
            e = np.kron(fi.conj(), fk)
            lam[k, i] = np.vdot(e, m.matrix)
    return lam


def herm_decomposition(m: SuperOperator, basis: Sequence[np.ndarray] | None = None) -> HermDecomposition:
    basis = pauli_operator_basis() if basis is None else basis
    lam = coefficient_matrix(m, basis)
    if not is_hermitian(lam, 1e-10):
        raise ValueError("map does not preserve hermiticity")
    spec = hermitian_eigen(lam)
    u = spec.eigenvectors
    ops = [sum(u[k, j] * as_matrix(basis[k]) for k in range(len(basis))) for j in range(len(basis))]
    return HermDecomposition(spec.eigenvalues, tuple(ops))


class Positivity(enum.Enum):
    CERTIFIED_POSITIVE = "certified_positive"
    INCONCLUSIVE = "inconclusive"


def positivity_single_negative(h: HermDecomposition, tol: float = 1e-12) -> Positivity:
    """Sufficient positivity test for a map with exactly one negative eigenvalue.

    With l_p < 0 and M = ||G_p||^2, the map is positive if M < 1 and every
    other l_k >= M/(1-M) |l_p|. Never reports non-positivity.
    """
    neg = [j for j, l in enumerate(h.eigenvalues) if l < -tol]
    if len(neg) != 1:
        raise ValueError(f"expected exactly one negative eigenvalue, found {len(neg)}")
    p = neg[0]
    m = operator_norm(h.operators[p]) ** 2
    if m >= 1 - tol:
        return Positivity.INCONCLUSIVE
    bound = m / (1 - m) * abs(h.eigenvalues[p])
    others = np.delete(h.eigenvalues, p)
    return Positivity.CERTIFIED_POSITIVE if np.all(others >= bound - tol) else Positivity.INCONCLUSIVE


# --- GKS generators ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GksGenerator:
    """L[rho] = -i[H, rho] + sum_ij C_ij (F_i rho F_j^dag - {F_j^dag F_i, rho}/2).

    ``basis`` holds F_1 .. F_{d^2-1}; the normalized identity F_0 is implicit.
    """

    hamiltonian: np.ndarray
    kossakowski: np.ndarray
    basis: tuple

    def __post_init__(self):
        h = as_matrix(self.hamiltonian)
        c = as_matrix(self.kossakowski)
        basis = tuple(as_matrix(f) for f in self.basis)
        d = h.shape[0]
        if len(basis) != d * d - 1 or c.shape != (d * d - 1, d * d - 1):
            raise ValueError("need d^2 - 1 basis elements and a matching Kossakowski matrix")
        if not is_hermitian(h):
            raise ValueError("Hamiltonian is not Hermitian")
        if not is_hermitian(c):
            raise ValueError("Kossakowski matrix is not Hermitian")
        check_operator_basis((np.eye(d) / math.sqrt(d),) + basis)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "kossakowski", c)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


def gks_generator_superop(g: GksGenerator) -> SuperOperator:
    d = g.dim
    one = np.eye(d)
    h = g.hamiltonian
    m = -1j * (np.kron(one, h) - np.kron(h.T, one))
    for i, fi in enumerate(g.basis):
        for j, fj in enumerate(g.basis):
            c = g.kossakowski[i, j]
            if c == 0:
                continue
            a = fj.conj().T @ fi
            m = m + c * (np.kron(fj.conj(), fi) - 0.5 * (np.kron(one, a) + np.kron(a.T, one)))
    return SuperOperator(d, m)


def exp_generator(l: SuperOperator, t: float) -> SuperOperator:
    """exp(t L) by scaling and squaring a truncated Taylor series."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    a = t * l.matrix
    norm = np.max(np.sum(np.abs(a), axis=0), initial=0.0)
    s = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    a = a / 2 ** s
    n = a.shape[0]
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 40):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) < 1e-18:
            break
    for _ in range(s):
        result = result @ result
    return SuperOperator(l.dim, result)


KOSSAKOWSKI_1 = np.eye(3)
KOSSAKOWSKI_2 = np.diag([1.0, -1.0, 1.0])


def example_generator(kind: str) -> GksGenerator:
    """H = 0, F_i = sigma_i/sqrt2, with C_1 = diag(1,1,1) (``gamma1``) or C_2 = diag(1,-1,1) (``gamma2``)."""
    c = {"gamma1": KOSSAKOWSKI_1, "gamma2": KOSSAKOWSKI_2}[kind]
    return GksGenerator(np.zeros((2, 2)), c, tuple(pauli_operator_basis()[1:]))


def example_generator_direct(kind: str) -> SuperOperator:
    """The same two generators written with the Pauli conjugations S_i directly."""
    s = [pauli_conj(i) for i in range(1, 4)]
    one = SuperOperator.identity(2)
    if kind == "gamma1":
        return 0.5 * (s[0] + s[1] + s[2] - 3 * one)
    if kind == "gamma2":
        return 0.5 * (s[0] - s[1] + s[2] - one)
    raise ValueError(f"unknown generator {kind!r}")


def _decay(t: float) -> float:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return math.exp(-2 * t)


def gamma1(t: float) -> SuperOperator:
    e = _decay(t)
    return e * identity_map(2) + (1 - e) / 2 * trace_map_2()


def gamma2(t: float) -> SuperOperator:
    e = _decay(t)
    return (1 + e) / 2 * identity_map(2) + (1 - e) / 2 * transpose_map_2()


def big_gamma(t: float) -> SuperOperator:
    """Gamma_t = gamma1_t (x) gamma2_t on 4x4 matrices."""
    return gamma1(t).tensor(gamma2(t))


def semigroup_map(kind: str, t: float) -> SuperOperator:
    builders = {"gamma1": gamma1, "gamma2": gamma2, "Gamma": big_gamma}
    if kind not in builders:
        raise ValueError(f"unknown semigroup {kind!r}")
    return builders[kind](t)


def semigroup_components(t: float) -> tuple[SuperOperator, SuperOperator]:
    """(G1, G2) with Gamma_t = G1 + G2 o T_4."""
    e = _decay(t)
    tr_id = trace_map_2().tensor(identity_map(2))
    t_id = transpose_map_2().tensor(identity_map(2))
    g1 = e * (1 + e) / 2 * identity_map(4) + (1 - e * e) / 4 * tr_id
    g2 = (1 - e) / 2 * (e * t_id + (1 - e) / 2 * tr_id)
    return g1, g2


def decomposition_residual(t: float) -> float:
    g1, g2 = semigroup_components(t)
    recon = g1 + g2.compose(transpose_map(4))
    return float(np.max(np.abs(recon.matrix - big_gamma(t).matrix)))


T_STAR = math.log(3) / 2


@dataclass(frozen=True)
class KossakowskiSpec:
    """Diagonal rates c1 (all positive) and c2 (negative only at ``negative_index``)."""

    c1: tuple
    c2: tuple
    negative_index: int

    def __post_init__(self):
        if len(self.c1) != len(self.c2):
            raise ValueError("c1 and c2 must have equal length")
        if any(c <= 0 for c in self.c1):
            raise ValueError("all c1 entries must be positive")
        neg = [i for i, c in enumerate(self.c2) if c < 0]
        if neg != [self.negative_index]:
            raise ValueError("c2 must be negative exactly at negative_index")
        if any(c == 0 for c in self.c2):
            raise ValueError("c2 entries must be nonzero")


def tensor_semigroup_positivity(spec: KossakowskiSpec) -> Positivity:
    """Sufficient condition for positivity of gamma1_t (x) gamma2_t with diagonal generators."""
    bound = abs(spec.c2[spec.negative_index])
    ok = all(c >= bound for c in spec.c1) and all(
        c >= bound for i, c in enumerate(spec.c2) if i != spec.negative_index)
    return Positivity.CERTIFIED_POSITIVE if ok else Positivity.INCONCLUSIVE
