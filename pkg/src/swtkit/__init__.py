"""Schrieffer-Wolff transformations for qubit-mapped fermionic Hamiltonians."""

from .pauli import PauliString, PauliTerm, PauliSum, multiply, commutator, canonicalize, is_diagonal
from .fermions import FermionOperator, FermionTerm, jw_map
from .models import SiamParams, siam_two_site, siam_chain, model_from_config
from .swt import (
    SplitHamiltonian,
    AnsatzBasis,
    SwtReport,
    ClosureError,
    GeneratorInfeasibleError,
    split,
    compute_eta,
    build_ansatz,
    solve_generator,
    effective_hamiltonian,
    bch_conjugate,
    run_swt,
)
from .dense import (
    to_matrix,
    pauli_decompose,
    exact_generator_dense,
    DegeneracyReport,
    spectral_compare,
    SpectralReport,
    conjugate_exact,
    fermion_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "PauliString",
    "PauliTerm",
    "PauliSum",
    "multiply",
    "commutator",
    "canonicalize",
    "is_diagonal",
    "FermionOperator",
    "FermionTerm",
    "jw_map",
    "SiamParams",
    "siam_two_site",
    "siam_chain",
    "model_from_config",
    "SplitHamiltonian",
    "AnsatzBasis",
    "SwtReport",
    "ClosureError",
    "GeneratorInfeasibleError",
    "split",
    "compute_eta",
    "build_ansatz",
    "solve_generator",
    "effective_hamiltonian",
    "bch_conjugate",
    "run_swt",
    "to_matrix",
    "pauli_decompose",
    "exact_generator_dense",
    "DegeneracyReport",
    "spectral_compare",
    "SpectralReport",
    "conjugate_exact",
    "fermion_matrix",
]
