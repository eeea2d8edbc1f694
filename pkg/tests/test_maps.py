import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from boundlattice import maps as mp
from boundlattice.linalg import eigvalsh, is_psd, kron
from boundlattice.pauli import flip_v, p_plus, pauli

from conftest import random_density, random_unit

T_SAMPLES = (0.0, 0.05, 0.1, 0.3, 0.5, math.log(3) / 2, 0.6, 1.0, 2.0, 5.0)


def test_vectorization_convention(rng):
    a, x, b = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(3))
    np.testing.assert_allclose(mp.vec(a @ x @ b), np.kron(b.T, a) @ mp.vec(x))
    np.testing.assert_array_equal(mp.unvec(mp.vec(x), 3), x)
    np.testing.assert_allclose(mp.superop_conj(a, b)(x), a @ x @ b)
    np.testing.assert_allclose(mp.SuperOperator.from_function(lambda y: a @ y @ b, 3).matrix, np.kron(b.T, a))


def test_superoperator_algebra(rng):
    u = mp.superop_conj(rng.normal(size=(2, 2)))
    v = mp.transpose_map_2()
    x = rng.normal(size=(2, 2))
    np.testing.assert_allclose((u @ v)(x), u(v(x)))
    np.testing.assert_allclose((2 * u - v + u)(x), 3 * u(x) - v(x))
    with pytest.raises(ValueError):
        u + mp.identity_map(3)
    with pytest.raises(ValueError):
        mp.SuperOperator(2, np.eye(3))


def test_tensor_of_maps(rng):
    a = mp.superop_conj(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    b = mp.transpose_map(3)
    x, y = rng.normal(size=(2, 2)), rng.normal(size=(3, 3))
    np.testing.assert_allclose(a.tensor(b)(np.kron(x, y)), np.kron(a(x), b(y)), atol=1e-13)
    np.testing.assert_allclose(mp.gamma1(0.3).tensor(mp.gamma2(0.3)).matrix, mp.big_gamma(0.3).matrix)


def test_kraus_examples(rng):
    np.testing.assert_allclose(mp.superop_from_kraus([np.eye(2)]).matrix, np.eye(4))
    tr = mp.superop_from_kraus([pauli(a) / math.sqrt(2) for a in range(4)])
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    np.testing.assert_allclose(tr(x), np.trace(x) * np.eye(2), atol=1e-14)
    np.testing.assert_allclose(tr.matrix, mp.trace_map_2().matrix, atol=1e-15)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    rho = random_density(rng, 4)
    np.testing.assert_allclose(eigvalsh(mp.superop_from_kraus([q])(rho)), eigvalsh(rho), atol=1e-12)
    with pytest.raises(ValueError):
        mp.KrausSet(())
    assert mp.KrausSet((q,)).is_trace_preserving()


@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_kraus_maps_are_cp(k, seed):
    g = np.random.default_rng(seed)
    ops = [g.normal(size=(3, 3)) + 1j * g.normal(size=(3, 3)) for _ in range(k)]
    assert mp.is_cp(mp.superop_from_kraus(ops))


def test_choi_examples():
    np.testing.assert_allclose(mp.choi(mp.identity_map(2)), p_plus(2), atol=1e-15)
    np.testing.assert_allclose(mp.choi(mp.transpose_map_2()), flip_v(2) / 2, atol=1e-15)
    np.testing.assert_allclose(mp.choi_eigenvalues(mp.transpose_map_2()), [0.5, 0.5, 0.5, -0.5], atol=1e-12)
    np.testing.assert_allclose(mp.choi(mp.trace_map_2()), np.eye(4) / 2, atol=1e-15)
    np.testing.assert_allclose(mp.transpose_map_2().matrix, mp.transpose_map(2).matrix, atol=1e-15)


def test_choi_is_affine(rng):
    a = mp.superop_conj(rng.normal(size=(2, 2)))
    b = mp.transpose_map_2()
    np.testing.assert_allclose(mp.choi(0.3 * a + 0.7 * b), 0.3 * mp.choi(a) + 0.7 * mp.choi(b), atol=1e-14)


def test_is_cp_examples():
    assert not mp.is_cp(mp.transpose_map_2())
    assert mp.is_cp(mp.trace_map_2())
    assert not mp.is_cp(mp.semigroup_components(0.2)[1])
    assert mp.is_cp(mp.semigroup_components(0.6)[1])


# --- single-negative-eigenvalue positivity test -------------------------------

def _decomposition(ls, ops):
    return mp.HermDecomposition(np.array(ls, dtype=float), tuple(ops))


def test_transposition_certified():
    h = _decomposition([1, 1, -1, 1], [pauli(a) / math.sqrt(2) for a in range(4)])
    assert h.norms[2] ** 2 == pytest.approx(0.5)
    assert mp.positivity_single_negative(h) is mp.Positivity.CERTIFIED_POSITIVE
    np.testing.assert_allclose(h.superop().matrix, mp.transpose_map_2().matrix, atol=1e-15)
    derived = mp.herm_decomposition(mp.transpose_map_2())
    assert mp.positivity_single_negative(derived) is mp.Positivity.CERTIFIED_POSITIVE
    np.testing.assert_allclose(sorted(derived.eigenvalues), [-1, 1, 1, 1], atol=1e-12)


def test_rank_one_negative_term_inconclusive():
    units = []
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2))
            e[i, j] = 1
            units.append(e)
    h = _decomposition([-1, 5, 5, 5], units)
    assert h.norms[0] == pytest.approx(1)
    assert mp.positivity_single_negative(h) is mp.Positivity.INCONCLUSIVE


def test_small_positive_weights_inconclusive():
    h = _decomposition([0.1, 0.1, -1, 0.1], [pauli(a) / math.sqrt(2) for a in range(4)])
    assert mp.positivity_single_negative(h) is mp.Positivity.INCONCLUSIVE


def test_positivity_needs_one_negative():
    with pytest.raises(ValueError):
        mp.positivity_single_negative(_decomposition([1, 1, 1, 1], [pauli(a) / math.sqrt(2) for a in range(4)]))


def test_herm_decomposition_reconstructs(rng):
    m = mp.gamma2(0.2)
    h = mp.herm_decomposition(m)
    np.testing.assert_allclose(h.superop().matrix, m.matrix, atol=1e-13)


# --- generators and semigroups ------------------------------------------------

def test_zero_generator():
    g = mp.GksGenerator(np.zeros((2, 2)), np.zeros((3, 3)), tuple(mp.pauli_operator_basis()[1:]))
    np.testing.assert_array_equal(mp.gks_generator_superop(g).matrix, np.zeros((4, 4)))


def test_generator_validation():
    basis = tuple(mp.pauli_operator_basis()[1:])
    with pytest.raises(ValueError):
        mp.GksGenerator(np.array([[0, 1], [0, 0]]), np.eye(3), basis)
    with pytest.raises(ValueError):
        mp.GksGenerator(np.zeros((2, 2)), np.eye(3), basis[:2])
    with pytest.raises(ValueError):
        mp.GksGenerator(np.zeros((2, 2)), np.eye(3), (pauli(1), pauli(2), pauli(3)))


@pytest.mark.parametrize("kind", ["gamma1", "gamma2"])
def test_generator_routes_agree(kind, rng):
    l = mp.gks_generator_superop(mp.example_generator(kind))
    np.testing.assert_allclose(l.matrix, mp.example_generator_direct(kind).matrix, atol=1e-14)
    rho = random_density(rng, 2)
    assert abs(np.trace(l(rho))) < 1e-14


def test_l1_on_sigma3():
    l1 = mp.gks_generator_superop(mp.example_generator("gamma1"))
    np.testing.assert_allclose(l1(pauli(3)), -2 * pauli(3), atol=1e-14)


@pytest.mark.parametrize("kind", ["gamma1", "gamma2"])
@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0])
def test_exponential_matches_closed_form(kind, t):
    l = mp.gks_generator_superop(mp.example_generator(kind))
    e = mp.exp_generator(l, t)
    assert np.max(np.abs(e.matrix - mp.semigroup_map(kind, t).matrix)) <= 1e-8
    np.testing.assert_allclose(e.matrix, expm(t * l.matrix), atol=1e-12)


def test_exponential_basics(rng):
    l = mp.gks_generator_superop(mp.example_generator("gamma2"))
    np.testing.assert_array_equal(mp.exp_generator(l, 0).matrix, np.eye(4))
    s, t = 0.37, 1.21
    np.testing.assert_allclose(mp.exp_generator(l, s + t).matrix,
                               mp.exp_generator(l, s).matrix @ mp.exp_generator(l, t).matrix, atol=1e-9)
    big = mp.SuperOperator(4, rng.normal(size=(16, 16)) * 3)
    np.testing.assert_allclose(mp.exp_generator(big, 2.0).matrix, expm(2.0 * big.matrix), rtol=1e-9, atol=1e-9)
    with pytest.raises(ValueError):
        mp.exp_generator(l, -1)


def test_semigroup_limits():
    np.testing.assert_array_equal(mp.semigroup_map("gamma2", 0).matrix, np.eye(4))
    np.testing.assert_allclose(mp.semigroup_map("Gamma", 0).matrix, np.eye(16), atol=1e-15)
    np.testing.assert_allclose(mp.gamma1(20).matrix, 0.5 * mp.trace_map_2().matrix, atol=1e-10)
    with pytest.raises(ValueError):
        mp.semigroup_map("gamma3", 1)


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0])
def test_big_gamma_from_exponentials(t):
    l1 = mp.gks_generator_superop(mp.example_generator("gamma1"))
    l2 = mp.gks_generator_superop(mp.example_generator("gamma2"))
    composed = mp.exp_generator(l1, t).tensor(mp.exp_generator(l2, t))
    assert np.max(np.abs(composed.matrix - mp.big_gamma(t).matrix)) <= 1e-8


@pytest.mark.parametrize("t", np.round(np.arange(0, 1.01, 0.1), 2))
def test_decomposition_identity(t):
    assert mp.decomposition_residual(t) <= 1e-10
    g1, g2 = mp.semigroup_components(t)
    assert mp.is_cp(g1)
    assert mp.is_cp(g2) == (t == 0 or t >= mp.T_STAR)


def test_component_cp_threshold():
    g2 = lambda t: mp.choi_eigenvalues(mp.semigroup_components(t)[1])[-1]
    assert g2(mp.T_STAR - 1e-3) < 0
    assert g2(mp.T_STAR + 1e-3) >= -1e-12
    assert abs(g2(mp.T_STAR)) < 1e-12


def test_kossakowski_cp_correspondence():
    for t in (0.05, 0.1, 0.5, 1.0, 3.0):
        assert mp.is_cp(mp.gamma1(t))
    assert not mp.is_cp(mp.gamma2(0.1))
    assert is_psd(mp.KOSSAKOWSKI_1) and not is_psd(mp.KOSSAKOWSKI_2)


def test_big_gamma_self_dual():
    for t in (0.0, 0.2, 1.0):
        g = mp.big_gamma(t)
        assert np.max(np.abs(g.dual().matrix - g.matrix)) <= 1e-10


def test_dual_pairing(rng):
    m = mp.superop_conj(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)), rng.normal(size=(3, 3)))
    x, rho = rng.normal(size=(3, 3)), random_density(rng, 3)
    assert np.trace(m(x) @ rho) == pytest.approx(np.trace(x @ m.dual()(rho)))


@pytest.mark.parametrize("kind", ["gamma1", "gamma2", "Gamma"])
def test_trace_preservation(kind, rng):
    d = 4 if kind == "Gamma" else 2
    for t in T_SAMPLES:
        m = mp.semigroup_map(kind, t)
        assert mp.is_trace_preserving(m)
        rho = random_density(rng, d)
        assert abs(np.trace(m(rho)) - 1) <= 1e-10
    g1, g2 = mp.semigroup_components(0.4)
    assert mp.is_trace_preserving(g1 + g2 @ mp.transpose_map(4))


def test_big_gamma_positive_on_pure_and_product_states(rng):
    for t in T_SAMPLES:
        g = mp.big_gamma(t)
        for _ in range(20):
            v = random_unit(rng, 4)
            assert eigvalsh(g(np.outer(v, v.conj())))[-1] >= -1e-10
            a, b = random_unit(rng, 2), random_unit(rng, 2)
            w = np.kron(a, b)
            assert eigvalsh(g(np.outer(w, w.conj())))[-1] >= -1e-10


def test_big_gamma_not_cp_below_threshold():
    assert not mp.is_cp(mp.big_gamma(0.1))


def test_tensor_positivity_examples():
    assert mp.tensor_semigroup_positivity(mp.KossakowskiSpec((1, 1, 1), (1, -1, 1), 1)) \
        is mp.Positivity.CERTIFIED_POSITIVE
    assert mp.tensor_semigroup_positivity(mp.KossakowskiSpec((0.5, 1, 1), (1, -1, 1), 1)) \
        is mp.Positivity.INCONCLUSIVE
    assert mp.tensor_semigroup_positivity(mp.KossakowskiSpec((1, 1, 1), (0.5, -1, 1), 1)) \
        is mp.Positivity.INCONCLUSIVE
    with pytest.raises(ValueError):
        mp.KossakowskiSpec((1, 1, 1), (1, 1, 1), 1)
    with pytest.raises(ValueError):
        mp.KossakowskiSpec((-1, 1, 1), (1, -1, 1), 1)
