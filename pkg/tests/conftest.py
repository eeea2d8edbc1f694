import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

from boundlattice.states import LatticeSubset

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.load_profile("default")


def sites(*pairs):
    return LatticeSubset.from_sites(pairs)


# lattice subsets that the tests refer to by name
DIAGONAL = sites((0, 0), (1, 1), (2, 2), (3, 3))
EDGE6 = sites((0, 2), (1, 1), (2, 3), (3, 1), (3, 2), (3, 3))      # PPT on the boundary, bound entangled
BLOCK6 = sites((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1))     # separable 3x2 block
LINE6 = sites((0, 0), (2, 0), (0, 1), (1, 1), (0, 2), (3, 2))
LINE8 = sites((0, 2), (1, 2), (3, 2), (0, 1), (1, 1), (0, 0), (1, 0), (2, 0))
LINE10 = sites((0, 2), (1, 2), (2, 2), (3, 2), (0, 1), (1, 1), (2, 1), (0, 0), (1, 0), (2, 0))
NPT_GRAPHS = {
    4: sites((0, 0), (1, 0), (0, 1), (1, 2)),
    5: sites((0, 0), (1, 0), (2, 0), (0, 1), (1, 1)),
    6: sites((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 2)),
    7: sites((0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1)),
}

masks = st.integers(min_value=1, max_value=(1 << 16) - 1)


@st.composite
def weight_vectors(draw):
    raw = draw(st.lists(st.floats(0, 1), min_size=16, max_size=16).filter(lambda w: sum(w) > 1e-3))
    w = np.array(raw).reshape(4, 4)
    return w / w.sum()


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unit(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        title, ok, detail = mod.RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
