"""Convex lower bounds, feasible-point recovery and the inequality exporter.

Two bounds are computed for the constrained quadratic minimum: the
Lagrangian dual (a one-variable semidefinite feasibility search, solved by
bisection) and the direct lifted relaxation over unit-trace PSD matrices
(solved by projected descent in whitened coordinates).  Gaussian rounding
turns the relaxation matrix back into feasible coefficient vectors.

Eigenvalue computations here use LAPACK (numpy.linalg); the constrained
solver keeps its own Jacobi routine, so the two routes stay independent.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    BracketFailure,
    DegenerateConstraint,
    DegenerateRelaxation,
    InputError,
    ParseError,
    ShapeMismatch,
)
from .validation import check_real_symmetric

_TRUNCATION_REL = 1e-10


class DualBoundResult(NamedTuple):
    value: float
    iterations: int


class SdpBoundResult(NamedTuple):
    value: float
    iterations: int
    converged: bool
    X: np.ndarray


@dataclass(frozen=True)
class BoundReport:
    """Bounds, the rounded feasible point, and iteration metadata."""

    dual_bound: float
    sdp_bound: float
    primal_energy: float
    rounded_alpha: np.ndarray
    rounded_energy: float
    dual_iterations: int
    sdp_iterations: int
    sdp_converged: bool
    # Dual variable under the opposite sign convention (lambda <-> -lambda);
    # exposed so both parametrizations of the one-variable dual are visible.
    multiplier_flipped: float = None


def _validated_pair(D, E):
    D = check_real_symmetric(D, name="D")
    E = check_real_symmetric(E, name="E")
    if D.shape != E.shape:
        raise ShapeMismatch(f"D is {D.shape}, E is {E.shape}")
    return D, E


def _reduce_to_span(D, E):
    """Restrict the pencil to E's numerically positive eigenspace.

    Returns (D_r, e_vals, Q_kept) where D_r = Q^T D Q and E reduces to
    diag(e_vals) on the kept columns.
    """
    e_vals, Q = np.linalg.eigh(E)
    e_max = e_vals[-1]
    if e_max <= 0.0:
        raise DegenerateConstraint("constraint matrix has no positive eigenvalue")
    keep = e_vals > _TRUNCATION_REL * e_max
    Qk = Q[:, keep]
    return Qk.T @ D @ Qk, e_vals[keep], Qk


def dual_bound(D, E, tol=1e-10, max_iters=200):
    """Largest mu with D - mu*E PSD, by bisection.

    The initial bracket is [-R, R] with R = m*max|D|/lambda_min(E), a safe
    overestimate of any constrained stationary value.  Feasibility of mu is
    smallest-eigenvalue nonnegativity up to a 1e-12 relative floor.  Returns
    the feasible bracket end once the width drops below ``tol``.
    """
    D, E = _validated_pair(D, E)
    Dr, e_vals, _ = _reduce_to_span(D, E)
    e_min = float(e_vals.min())
    d_max = float(np.max(np.abs(D))) if np.max(np.abs(D)) > 0 else 0.0
    floor = -1e-12 * d_max

    def feasible(mu):
        shifted = Dr - mu * np.diag(e_vals)
        return float(np.linalg.eigvalsh(shifted)[0]) >= floor

    radius = D.shape[0] * d_max / e_min
    lo, hi = -radius, radius
    if not feasible(lo):
        raise BracketFailure(
            "D - mu*E is not PSD even at the lower bracket end; "
            "constraint matrix is not positive definite on the working subspace"
        )
    if feasible(hi):
        return DualBoundResult(value=float(hi), iterations=0)
    iterations = 0
    while hi - lo > tol and iterations < max_iters:
        mid = (lo + hi) / 2.0
        if feasible(mid):
            lo = mid
        else:
            hi = mid
        iterations += 1
    return DualBoundResult(value=float(lo), iterations=iterations)


def _project_unit_trace_psd(S):
    """Metric projection onto {Y PSD, trace Y = 1}.

    Alternating projections between the PSD cone (eigenvalue clipping) and
    the unit-trace slice (uniform diagonal shift) with Dykstra's correction
    terms.  Both projections are spectral, so the iteration runs on the
    eigenvalues of S.
    """
    w, U = np.linalg.eigh(S)
    k = w.shape[0]
    x = w.copy()
    p = np.zeros(k)
    q = np.zeros(k)
    for _ in range(200):
        y = np.maximum(x + p, 0.0)
        p = (x + p) - y
        shifted = y + q
        x_new = shifted + (1.0 - shifted.sum()) / k
        q = shifted - x_new
        if np.all(y >= -1e-15) and abs(x_new.sum() - 1.0) <= 1e-15:
            if np.max(np.abs(x_new - x)) <= 1e-16:
                x = x_new
                break
        x = x_new
    x = np.maximum(x, 0.0)
    x = x / x.sum()
    return (U * x) @ U.T


def sdp_bound(D, E, tol=1e-12, max_iters=5000):
    """Lifted relaxation value min <D, X> over Tr(EX)=1, X PSD.

    In whitened coordinates the feasible set is the unit-trace PSD body, so
    projected descent with step 1/||W||_2 and Dykstra-corrected alternating
    projections converges to the smallest whitened eigenvalue.  Stops when
    the objective improves by less than ``tol`` between iterations; reports
    ``converged=False`` when the iteration cap is hit first.
    """
    D, E = _validated_pair(D, E)
    Dr, e_vals, Qk = _reduce_to_span(D, E)
    scale = 1.0 / np.sqrt(e_vals)
    W = (Dr * scale).T * scale  # diag-scale both sides
    W = (W + W.T) / 2.0
    k = W.shape[0]

    spectral = float(np.max(np.abs(np.linalg.eigvalsh(W)))) if k else 0.0
    T = Qk * scale
    if spectral == 0.0:
        X = T @ (np.eye(k) / k) @ T.T
        return SdpBoundResult(value=0.0, iterations=0, converged=True, X=X)

    step = 1.0 / spectral
    Y = np.eye(k) / k
    objective = float(np.sum(W * Y))
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        Y = _project_unit_trace_psd(Y - step * W)
        new_objective = float(np.sum(W * Y))
        if abs(new_objective - objective) < tol:
            objective = new_objective
            converged = True
            break
        objective = new_objective
    X = T @ Y @ T.T
    X = (X + X.T) / 2.0
    return SdpBoundResult(
        value=objective, iterations=iterations, converged=converged, X=X
    )


def round_feasible(D, E, X, samples=1000, seed=0):
    """Recover a feasible coefficient vector from a relaxation matrix.

    Draws ``samples`` Gaussian vectors with covariance X, rescales each to
    the unit constraint shell and keeps the lowest energy; the leading
    eigenvector of X (rescaled) competes as an extra candidate.  Ties go to
    the eigenvector, then to the earliest sample.
    """
    D, E = _validated_pair(D, E)
    X = check_real_symmetric(X, name="X")
    if X.shape != D.shape:
        raise ShapeMismatch(f"X is {X.shape}, D is {D.shape}")
    if samples < 1:
        raise InputError(f"samples must be >= 1, got {samples}")

    w, U = np.linalg.eigh(X)
    w_max = float(w[-1])
    if w_max <= 1e-14 * max(1.0, float(np.max(np.abs(X)))):
        raise DegenerateRelaxation("relaxation matrix is numerically rank zero")
    trace_gap = abs(float(np.sum(E * X)) - 1.0)
    if trace_gap > 1e-6:
        raise InputError(
            f"relaxation matrix violates Tr(EX)=1 by {trace_gap:.3e}"
        )
    sqrt_X = U * np.sqrt(np.maximum(w, 0.0))

    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((int(samples), X.shape[0])) @ sqrt_X.T
    e_norms = np.einsum("ij,jk,ik->i", Z, E, Z)
    ok = e_norms > 1e-14
    best_alpha = None
    best_energy = np.inf
    if np.any(ok):
        Zs = Z[ok] / np.sqrt(e_norms[ok])[:, None]
        energies = np.einsum("ij,jk,ik->i", Zs, D, Zs)
        idx = int(np.argmin(energies))
        best_alpha = Zs[idx]
        best_energy = float(energies[idx])

    lead = U[:, -1]
    lead_norm = float(lead @ E @ lead)
    if lead_norm > 1e-14:
        lead = lead / np.sqrt(lead_norm)
        lead_energy = float(lead @ D @ lead)
        if lead_energy <= best_energy:
            best_alpha, best_energy = lead, lead_energy

    if best_alpha is None:
        raise DegenerateRelaxation(
            "no candidate could be rescaled onto the constraint shell"
        )
    if best_alpha[int(np.argmax(np.abs(best_alpha)))] < 0.0:
        best_alpha = -best_alpha
    return best_alpha, best_energy


def make_bound_report(D, E, primal_energy, samples=1000, seed=0,
                      dual_tol=1e-10, sdp_tol=1e-12, sdp_max_iters=5000):
    """Run both bounds plus rounding and assemble a BoundReport."""
    dual = dual_bound(D, E, tol=dual_tol)
    sdp = sdp_bound(D, E, tol=sdp_tol, max_iters=sdp_max_iters)
    alpha, energy = round_feasible(D, E, sdp.X, samples=samples, seed=seed)
    return BoundReport(
        dual_bound=dual.value,
        sdp_bound=sdp.value,
        primal_energy=float(primal_energy),
        rounded_alpha=alpha,
        rounded_energy=energy,
        dual_iterations=dual.iterations,
        sdp_iterations=sdp.iterations,
        sdp_converged=sdp.converged,
        multiplier_flipped=-dual.value,
    )


# ---------------------------------------------------------------------------
# Inequality-form exporter (single equality split into two inequalities).
# ---------------------------------------------------------------------------


def _format_rows(M):
    return [" ".join(repr(float(x)) for x in row) for row in M]


def export_p2(D, E):
    """Serialize the program with the equality split into two inequalities.

    Format: header ``QCQP m=<m>``, an ``OBJ`` block with the objective
    matrix, then two ``CON LE <offset>`` blocks, each meaning
    ``a^T A a + offset <= 0``.  The two constraints carry E with offset -1
    and -E with offset +1.
    """
    D, E = _validated_pair(D, E)
    lines = [f"QCQP m={D.shape[0]}", "OBJ"]
    lines += _format_rows(D)
    lines.append("CON LE -1.0")
    lines += _format_rows(E)
    lines.append("CON LE 1.0")
    lines += _format_rows(-E)
    return "\n".join(lines) + "\n"


def parse_p2(text):
    """Parse the inequality-form export back into (D, E)."""
    lines = [ln for ln in text.splitlines()]
    pos = 0

    def next_line():
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            raise ParseError("unexpected end of QCQP document")
        pos += 1
        return lines[pos - 1].strip(), pos

    header, lineno = next_line()
    if not header.startswith("QCQP m="):
        raise ParseError(f"expected 'QCQP m=<m>' header, got {header!r}", line=lineno)
    try:
        m = int(header.split("=", 1)[1])
    except ValueError:
        raise ParseError(f"bad size in header {header!r}", line=lineno) from None

    def read_block(expect_kind):
        tag, lineno = next_line()
        parts = tag.split()
        if parts[0] != expect_kind:
            raise ParseError(f"expected {expect_kind} block, got {tag!r}", line=lineno)
        offset = None
        if expect_kind == "CON":
            if len(parts) != 3 or parts[1] != "LE":
                raise ParseError(f"expected 'CON LE <offset>', got {tag!r}", line=lineno)
            offset = float(parts[2])
        rows = []
        for _ in range(m):
            line, lineno = next_line()
            fields = line.split()
            if len(fields) != m:
                raise ParseError(
                    f"expected {m} numbers per row, got {len(fields)}", line=lineno
                )
            rows.append([float(f) for f in fields])
        return np.array(rows), offset

    D, _ = read_block("OBJ")
    E_pos, off_neg = read_block("CON")
    E_neg, off_pos = read_block("CON")
    if off_neg != -1.0 or off_pos != 1.0:
        raise ParseError("constraint offsets must be -1 and +1")
    if not np.array_equal(E_neg, -E_pos):
        raise ParseError("second constraint matrix must be the negated first")
    return D, E_pos
