"""End-to-end orchestration: overlaps -> (realify) -> solve -> bounds."""

import time
from dataclasses import dataclass, field

import numpy as np

from .circuits import build_overlap_matrices, build_overlap_matrices_sampled
from .realify import canonicalize_phase, project_solution, realify_hermitian
from .relax import BoundReport, make_bound_report
from .solver import QcqpSolution, SolveOptions, solve_p1
from .validation import is_effectively_real

_REAL_TOL = 1e-12


@dataclass
class PipelineResult:
    """Everything produced by one pipeline run."""

    overlap: object  # OverlapPair
    d_solve: np.ndarray  # real symmetric matrices the solver consumed
    e_solve: np.ndarray
    solution: QcqpSolution
    realified: bool
    alpha_complex: np.ndarray	# canonical-phase coefficients in C^m
    bounds: BoundReport = None
    timings: dict = field(default_factory=dict)


def solve_overlap_pair(D, E, opts=None):
    """Solve for possibly complex Hermitian matrices.

    Real inputs go straight to the solver; complex ones are embedded into
    real symmetric matrices of twice the size first.  Returns
    (d_solve, e_solve, solution, alpha_complex, realified).
    """
    opts = opts or SolveOptions()
    if is_effectively_real(D, _REAL_TOL) and is_effectively_real(E, _REAL_TOL):
        d_solve = np.asarray(D).real.astype(float)
        e_solve = np.asarray(E).real.astype(float)
        realified = False
    else:
        d_solve = realify_hermitian(D)
        e_solve = realify_hermitian(E)
        realified = True
    solution = solve_p1(d_solve, e_solve, opts)
    if realified:
        alpha_complex = canonicalize_phase(project_solution(solution.alpha))
    else:
        alpha_complex = solution.alpha.astype(complex)
    return d_solve, e_solve, solution, alpha_complex, realified


def run_pipeline(hamiltonian, ansatz, shots=None, seed=0, opts=None,
                 with_bounds=True, rounding_samples=1000, workers=None):
    """Run the full pipeline on a Hamiltonian/ansatz pair.

    ``shots=None`` builds exact overlap matrices; an integer emulates that
    many interference-test shots per matrix element, seeded for
    reproducibility.
    """
    opts = opts or SolveOptions()
    timings = {}

    t0 = time.perf_counter()
    if shots is None:
        pair = build_overlap_matrices(hamiltonian, ansatz, workers=workers)
    else:
        pair = build_overlap_matrices_sampled(
            hamiltonian, ansatz, shots=shots, seed=seed, workers=workers
        )
    timings["overlaps"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    d_solve, e_solve, solution, alpha_complex, realified = solve_overlap_pair(
        pair.D, pair.E, opts
    )
    timings["solve"] = time.perf_counter() - t0

    bounds = None
    if with_bounds:
        t0 = time.perf_counter()
        bounds = make_bound_report(
            d_solve, e_solve, solution.energy,
            samples=rounding_samples, seed=seed,
        )
        timings["bounds"] = time.perf_counter() - t0

    return PipelineResult(
        overlap=pair,
        d_solve=d_solve,
        e_solve=e_solve,
        solution=solution,
        realified=realified,
        alpha_complex=alpha_complex,
        bounds=bounds,
        timings=timings,
    )
