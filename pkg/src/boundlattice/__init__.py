"""Bound entanglement of 4x4 lattice states detected with a positive dynamical semigroup."""
from .detection import Verdict, VerdictKind, classify, evolved_spectrum, p_coeff, line_witness, witness_d
from .equivalence import EquivalenceOp, canonical_form, orbit
from .maps import SuperOperator, big_gamma, choi, is_cp, semigroup_components, semigroup_map
from .ppt import ppt_combinatorial, ppt_spectral, pt_spectrum_closed_form
from .separability import rho6_ensemble, separability_certificate, verify_ensemble
from .states import LatticeSubset, lattice_state, render_grid, parse_grid, weighted_state

__all__ = [
    "EquivalenceOp", "LatticeSubset", "SuperOperator", "Verdict", "VerdictKind",
    "big_gamma", "canonical_form", "choi", "classify", "evolved_spectrum", "is_cp",
    "lattice_state", "orbit", "p_coeff", "parse_grid", "ppt_combinatorial", "ppt_spectral",
    "line_witness", "pt_spectrum_closed_form", "render_grid", "rho6_ensemble",
    "semigroup_components", "semigroup_map", "separability_certificate", "verify_ensemble",
    "weighted_state", "witness_d",
]
