"""Estimator-style front end so the pipeline composes with sklearn tooling.

The hyperparameters (shot budget, seed, solver tolerances) live on the
constructor and work with ``get_params``/``set_params``/``clone``; fitting
stores the overlap matrices, the solved coefficients and the certificate as
trailing-underscore attributes.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .circuits import AnsatzSet, parse_ansatz, prepare_state
from .pauli import Hamiltonian, parse_hamiltonian
from .pipeline import run_pipeline
from .solver import SolveOptions


class QuantumAssistedEigensolver(BaseEstimator):
    """Ground-state approximation from a fixed linear-combination ansatz.

    Parameters
    ----------
    shots : int or None
        Per-element shot budget for the emulated interference tests; None
        computes exact overlaps.
    seed : int
        Seed for shot sampling and rounding. Ignored in exact mode except
        for the rounding step.
    compute_bounds : bool
        Also compute the dual/relaxation lower bounds and a rounded feasible
        point during fit.
    rounding_samples : int
        Gaussian candidates drawn when rounding the relaxation matrix.
    e_truncation_rel, kkt_tol, psd_tol, max_sweeps
        Forwarded to the constrained solver.

    Attributes
    ----------
    d_matrix_, e_matrix_ : complex ndarray, shape (m, m)
        Overlap matrices as built (before any realification).
    energy_ : float
        Minimal constrained energy.
    alpha_ : complex ndarray, shape (m,)
        Optimal combination coefficients, canonical phase/sign.
    lambda_ : float
        Constraint multiplier (equals minus the energy).
    certificate_ : bool
        True when the sufficient global-optimality condition holds.
    solution_ : QcqpSolution
        Full solver record on the (possibly realified) real matrices.
    bounds_ : BoundReport or None
        Present when ``compute_bounds`` is set.
    """

    def __init__(self, shots=None, seed=0, compute_bounds=False,
                 rounding_samples=1000, e_truncation_rel=1e-10,
                 kkt_tol=1e-8, psd_tol=1e-9, max_sweeps=100):
        self.shots = shots
        self.seed = seed
        self.compute_bounds = compute_bounds
        self.rounding_samples = rounding_samples
        self.e_truncation_rel = e_truncation_rel
        self.kkt_tol = kkt_tol
        self.psd_tol = psd_tol
        self.max_sweeps = max_sweeps

    def _solve_options(self):
        return SolveOptions(
            e_truncation_rel=self.e_truncation_rel,
            kkt_tol=self.kkt_tol,
            psd_tol=self.psd_tol,
            max_sweeps=self.max_sweeps,
        )

    def fit(self, hamiltonian, ansatz):
        """Build the overlap matrices and solve the constrained program.

        ``hamiltonian`` may be a Hamiltonian or its text serialization;
        ``ansatz`` an AnsatzSet or gate-list text.
        """
        if isinstance(hamiltonian, str):
            hamiltonian = parse_hamiltonian(hamiltonian)
        if not isinstance(hamiltonian, Hamiltonian):
            raise TypeError("hamiltonian must be a Hamiltonian or text")
        if isinstance(ansatz, str):
            ansatz = parse_ansatz(ansatz)
        if not isinstance(ansatz, AnsatzSet):
            raise TypeError("ansatz must be an AnsatzSet or text")

        result = run_pipeline(
            hamiltonian, ansatz,
            shots=self.shots, seed=self.seed,
            opts=self._solve_options(),
            with_bounds=self.compute_bounds,
            rounding_samples=self.rounding_samples,
        )
        self.d_matrix_ = result.overlap.D
        self.e_matrix_ = result.overlap.E
        self.shot_meta_ = result.overlap.shot_meta
        self.solution_ = result.solution
        self.energy_ = result.solution.energy
        self.lambda_ = result.solution.lam
        self.alpha_ = result.alpha_complex
        self.certificate_ = result.solution.global_certificate
        self.realified_ = result.realified
        self.bounds_ = result.bounds
        return self

    def _check_fitted(self):
        if not hasattr(self, "solution_"):
            raise NotFittedError("call fit before using the solution")

    def ground_state(self, ansatz):
        """Assemble the normalized approximate ground statevector."""
        self._check_fitted()
        if isinstance(ansatz, str):
            ansatz = parse_ansatz(ansatz)
        states = [prepare_state(c) for c in ansatz.circuits]
        if len(states) != self.alpha_.shape[0]:
            raise ValueError("ansatz size does not match fitted coefficients")
        psi = np.zeros_like(states[0])
        for a, phi in zip(self.alpha_, states):
            psi = psi + a * phi
        return psi / np.linalg.norm(psi)

    def score(self, hamiltonian=None, ansatz=None):
        """Negated energy, so higher is better under sklearn conventions."""
        self._check_fitted()
        return -self.energy_
