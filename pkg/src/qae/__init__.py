"""Quantum assisted eigensolver.

Approximates the ground state of a Pauli-sum Hamiltonian with a fixed linear
combination of circuit-prepared states.  The quantum stage (emulated here by
statevector simulation, optionally with shot noise) produces two overlap
matrices; the classical stage minimizes a quadratic form over a quadratic
equality shell, certifies global optimality, and computes convex-relaxation
lower bounds.
"""

__version__ = "0.1.0"

from . import errors
from .pauli import (
    Hamiltonian,
    PauliString,
    apply_hamiltonian,
    apply_pauli,
    dense_matrix,
    parse_hamiltonian,
)
from .circuits import (
    AnsatzSet,
    Circuit,
    Gate,
    OverlapPair,
    ShotMeta,
    ansatz_to_text,
    build_overlap_matrices,
    build_overlap_matrices_sampled,
    hadamard_estimate,
    overlap,
    parse_ansatz,
    prepare_state,
)
from .realify import (
    canonicalize_phase,
    lift_vector,
    project_solution,
    realify_hermitian,
)
from .solver import (
    QcqpSolution,
    SolveOptions,
    certify_global,
    dump_matrix_pair,
    jacobi_eigh,
    kkt_residuals,
    load_matrix_pair,
    oracle_min,
    pencil_eigenpairs,
    second_order_check,
    solve_p1,
)
from .relax import (
    BoundReport,
    dual_bound,
    export_p2,
    make_bound_report,
    parse_p2,
    round_feasible,
    sdp_bound,
)
from .pipeline import PipelineResult, run_pipeline, solve_overlap_pair
from .estimator import QuantumAssistedEigensolver

__all__ = [
    "__version__",
    "errors",
    "Hamiltonian",
    "PauliString",
    "apply_hamiltonian",
    "apply_pauli",
    "dense_matrix",
    "parse_hamiltonian",
    "AnsatzSet",
    "Circuit",
    "Gate",
    "OverlapPair",
    "ShotMeta",
    "ansatz_to_text",
    "build_overlap_matrices",
    "build_overlap_matrices_sampled",
    "hadamard_estimate",
    "overlap",
    "parse_ansatz",
    "prepare_state",
    "canonicalize_phase",
    "lift_vector",
    "project_solution",
    "realify_hermitian",
    "QcqpSolution",
    "SolveOptions",
    "certify_global",
    "dump_matrix_pair",
    "jacobi_eigh",
    "kkt_residuals",
    "load_matrix_pair",
    "oracle_min",
    "pencil_eigenpairs",
    "second_order_check",
    "solve_p1",
    "BoundReport",
    "dual_bound",
    "export_p2",
    "make_bound_report",
    "parse_p2",
    "round_feasible",
    "sdp_bound",
    "PipelineResult",
    "run_pipeline",
    "solve_overlap_pair",
    "QuantumAssistedEigensolver",
]
