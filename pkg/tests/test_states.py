import json

import numpy as np
import pytest
from hypothesis import given

from boundlattice.linalg import eigvalsh
from boundlattice.pauli import p_plus, projector_stack
from boundlattice.states import (FULL_MASK, LatticeSubset, lattice_state, lattice_state_matrices, parse_grid,
                                 render_grid, uniform_weights, weighted_state)

from conftest import DIAGONAL, EDGE6, masks, weight_vectors


def spectrum(state):
    return eigvalsh(state.matrix)


def test_subset_basics():
    s = LatticeSubset.from_sites([(0, 2), (1, 1)])
    assert s.n == len(s) == 2
    assert (1, 1) in s and (2, 2) not in s
    assert s.sites == [(0, 2), (1, 1)]
    assert str(s) == "{(0,2), (1,1)}"
    assert s.indicator()[0, 2] == 1 and s.indicator().sum() == 2
    with pytest.raises(ValueError):
        LatticeSubset(FULL_MASK + 1)


@given(masks)
def test_json_round_trip(mask):
    s = LatticeSubset(mask)
    assert LatticeSubset.from_json(json.loads(json.dumps(s.to_json()))) == s


def test_single_site_state():
    np.testing.assert_allclose(lattice_state(LatticeSubset.from_sites([(0, 0)])).matrix, p_plus(4), atol=1e-15)


def test_diagonal_state():
    ev = spectrum(lattice_state(DIAGONAL))
    assert ev.sum() == pytest.approx(1)
    np.testing.assert_allclose(ev, [0.25] * 4 + [0] * 12, atol=1e-12)


def test_edge_state_spectrum():
    np.testing.assert_allclose(spectrum(lattice_state(EDGE6)), [1 / 6] * 6 + [0] * 10, atol=1e-12)


def test_weighted_examples():
    np.testing.assert_allclose(weighted_state(np.full(16, 1 / 16)).matrix, np.eye(16) / 16, atol=1e-15)
    point = np.zeros((4, 4))
    point[0, 0] = 1
    np.testing.assert_allclose(weighted_state(point).matrix, p_plus(4), atol=1e-15)
    pair = np.zeros((4, 4))
    pair[0, 1] = pair[1, 0] = 0.5
    np.testing.assert_allclose(spectrum(weighted_state(pair)), [0.5, 0.5] + [0] * 14, atol=1e-12)
    assert weighted_state(pair).support == LatticeSubset.from_sites([(0, 1), (1, 0)])


@pytest.mark.parametrize("bad", [np.full(16, 1 / 15), -np.eye(4) + np.full((4, 4), 1 / 8)])
def test_weights_validated(bad):
    with pytest.raises(ValueError):
        weighted_state(bad)


def test_empty_subset_rejected():
    with pytest.raises(ValueError):
        lattice_state(LatticeSubset(0))


@given(masks)
def test_lattice_state_properties(mask):
    s = LatticeSubset(mask)
    state = lattice_state(s)
    np.testing.assert_array_equal(state.matrix, weighted_state(uniform_weights(s)).matrix)
    ev = spectrum(state)
    assert int(np.sum(ev > 1e-10)) == s.n
    w = state.weights.reshape(16)
    assert (w * np.einsum("kii->k", projector_stack()).real).sum() == pytest.approx(1)


def test_batched_matrices():
    ms = [1, 0x0f0f, FULL_MASK, EDGE6.mask]
    stack = lattice_state_matrices(ms)
    for m, rho in zip(ms, stack):
        np.testing.assert_allclose(rho, lattice_state(LatticeSubset(m)).matrix, atol=1e-15)


def test_render_diagonal():
    text = render_grid(DIAGONAL)
    lines = text.splitlines()
    assert lines[0] == "3 |   |   |   | × |"
    assert lines[3] == "0 | × |   |   |   |"
    assert render_grid(LatticeSubset.from_sites([(0, 0)])).splitlines()[0] == "3 |   |   |   |   |"


@given(masks)
def test_grid_round_trip(mask):
    s = LatticeSubset(mask)
    assert parse_grid(render_grid(s)) == s
    assert parse_grid(render_grid(s, mark="x")) == s


def test_parse_grid_errors():
    with pytest.raises(ValueError):
        parse_grid("3 | x | |\n")
    with pytest.raises(ValueError):
        parse_grid("3 | x |   |   |   |\n3 |   |   |   |   |\n")
