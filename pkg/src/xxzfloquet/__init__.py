"""Driven XXZ chain: Bessel-dressed effective Hamiltonian and state-selective localization."""

__version__ = "0.1.0"

from .classifier import classify_cluster, classify_product_state, enumerate_localized_states, library_state
from .evolution import EvolutionConfig, evolve_periodic, evolve_static, expm_apply
from .hilbert import ProductState, SpinBasis, StateVector, parse_spin_string, product_state_vector
from .lattice import LatticeGraph, build_chain, build_custom, build_square
from .operators import DrivenXXZ, ModelParams, OperatorHandle, build_dense
from .specfun import j0, j0_zero

__all__ = [
    "DrivenXXZ", "EvolutionConfig", "LatticeGraph", "ModelParams", "OperatorHandle",
    "ProductState", "SpinBasis", "StateVector", "build_chain", "build_custom", "build_dense",
    "build_square", "classify_cluster", "classify_product_state", "enumerate_localized_states",
    "evolve_periodic", "evolve_static", "expm_apply", "j0", "j0_zero", "library_state",
    "parse_spin_string", "product_state_vector",
]
