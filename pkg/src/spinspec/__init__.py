"""Spin Hamiltonians built from Pauli strings: exact spectra, level crossings, entanglement."""
from .entanglement import (
    PureState,
    TangleReport,
    bipartite_tangle,
    eigenvector_tangles,
    is_product,
    schmidt_coefficients,
    single_qubit_tangles,
    subspace_tangle_range,
    tangle2,
    three_tangle,
)
from .hamiltonian import (
    HamiltonianSpec,
    OperatorTerm,
    TripleSpinParams,
    TwoSpinParams,
    build_matrix,
    parse_terms,
    preset_H2,
    preset_H3,
    preset_K2,
    preset_K3,
    validate_assumptions,
)
from .linalg_core import (
    ConvergenceError,
    NonHermitianError,
    Spectrum,
    commutator,
    eigh,
    hs_inner,
    kron,
    mat_exp_hermitian,
    swap_permutation,
)
from .pauli import PauliString, closure, commutes, multiply, parse_pauli, string_to_matrix
from .spectra import (
    closed_form_H2,
    closed_form_H3,
    closed_form_K2,
    closed_form_product_model,
    detect_crossings,
    partition_function,
    sweep,
)
from .verify import verify_paper

__version__ = "0.1.0"
