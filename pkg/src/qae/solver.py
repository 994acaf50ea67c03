"""Minimization of a quadratic form over a quadratic equality shell.

Solves ``minimize a^T D a subject to a^T E a = 1`` for real symmetric D and
(numerically) PSD E.  The constraint matrix is eigendecomposed with cyclic
Jacobi rotations, near-null directions are truncated, and the whitened
problem reduces to a smallest-eigenpair computation.  First/second-order
conditions and the certificate matrix D + lambda*E are reported with every
solution; its positive semidefiniteness promotes a local minimum to the
global one.

Complex Hermitian inputs must be routed through :mod:`qae.realify` first;
this module is real-only.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateConstraint,
    OracleSizeExceeded,
    ParseError,
    ShapeMismatch,
)
from .validation import check_real_symmetric, check_vector

_OFF_DIAG_EPS = 1e-15  # relative off-diagonal Frobenius target for Jacobi sweeps


def _off_diagonal_norm(A):
    # computed entrywise: norm(A)^2 - norm(diag)^2 would cancel away
    # everything below norm(A)*sqrt(eps)
    off = A - np.diag(A.diagonal())
    return np.linalg.norm(off)


@dataclass(frozen=True)
class SolveOptions:
    """Numerical knobs for the constrained solve."""

    e_truncation_rel: float = 1e-10
    kkt_tol: float = 1e-8
    psd_tol: float = 1e-9
    max_sweeps: int = 100

    def __post_init__(self):
        for name in ("e_truncation_rel", "kkt_tol", "psd_tol"):
            if getattr(self, name) <= 0:
                raise ShapeMismatch(f"{name} must be positive")
        if self.max_sweeps < 1:
            raise ShapeMismatch("max_sweeps must be positive")


@dataclass(frozen=True)
class QcqpSolution:
    """Solution record: coefficients, multiplier, energy and check results."""

    alpha: np.ndarray
    lam: float
    energy: float
    kkt_stationarity: float
    kkt_feasibility: float
    second_order_ok: bool
    global_certificate: bool
    degenerate: bool = field(default=False)


def jacobi_eigh(A, max_sweeps=100):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Row-major sweep order (p ascending, then q > p).  Returns eigenvalues in
    ascending order and the matching orthonormal eigenvector columns.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    Q = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), Q
    norm = np.linalg.norm(A)
    if norm == 0.0:
        return np.zeros(n), Q
    for _ in range(max_sweeps):
        if _off_diagonal_norm(A) <= _OFF_DIAG_EPS * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= _OFF_DIAG_EPS * norm / n:
                    continue
                # Symmetric Schur rotation zeroing A[p,q] (smaller-angle root).
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
                qp, qq = Q[:, p].copy(), Q[:, q].copy()
                Q[:, p] = c * qp - s * qq
                Q[:, q] = s * qp + c * qq
    values = A.diagonal().copy()
    order = np.argsort(values, kind="stable")
    return values[order], Q[:, order]


def _truncated_whitener(E, rel_cutoff, max_sweeps):
    """Eigenpairs of E above the relative cutoff, as a whitening map.

    Returns (T, lam_kept) with T = Q_kept * lam_kept^{-1/2}, so that
    T^T E T = I on the kept subspace.
    """
    lam, Q = jacobi_eigh(E, max_sweeps=max_sweeps)
    lam_max = lam[-1]
    if lam_max <= 0.0:
        raise DegenerateConstraint("constraint matrix is numerically zero")
    keep = lam > rel_cutoff * lam_max
    if not np.any(keep):
        raise DegenerateConstraint("no constraint eigenvalue above truncation cutoff")
    lam_kept = lam[keep]
    T = Q[:, keep] / np.sqrt(lam_kept)
    return T, lam_kept


def solve_p1(D, E, opts=None):
    """Minimize the quadratic form of D on the unit shell of E.

    The E-eigendecomposition restricts to the span of the ansatz states
    (eigenvalues below ``e_truncation_rel`` times the largest are dropped),
    the whitened matrix's smallest eigenpair gives the optimum, and the sign
    is fixed so the largest-magnitude coefficient is positive.
    """
    opts = opts or SolveOptions()
    D = check_real_symmetric(D, name="D")
    E = check_real_symmetric(E, name="E")
    if D.shape != E.shape:
        raise ShapeMismatch(f"D is {D.shape}, E is {E.shape}")

    T, _ = _truncated_whitener(E, opts.e_truncation_rel, opts.max_sweeps)
    W = T.T @ D @ T
    W = (W + W.T) / 2.0
    mu, U = jacobi_eigh(W, max_sweeps=opts.max_sweeps)

    alpha = T @ U[:, 0]
    alpha = alpha / np.sqrt(alpha @ E @ alpha)
    if alpha[int(np.argmax(np.abs(alpha)))] < 0.0:
        alpha = -alpha

    energy = float(mu[0])
    lam = -energy
    stationarity, feasibility, _ = kkt_residuals(D, E, alpha, lam)
    degenerate = len(mu) > 1 and mu[1] - mu[0] <= 1e-12 * max(1.0, abs(energy))
    return QcqpSolution(
        alpha=alpha,
        lam=lam,
        energy=energy,
        kkt_stationarity=stationarity,
        kkt_feasibility=feasibility,
        second_order_ok=second_order_check(D, E, alpha, lam, opts.psd_tol),
        global_certificate=certify_global(D, E, lam, opts.psd_tol),
        degenerate=bool(degenerate),
    )


def pencil_eigenpairs(D, E, opts=None):
    """All stationary pairs of the constrained problem, energies ascending.

    Returns (energies, alphas) where column k of ``alphas`` is feasible
    (unit E-norm) and stationary with multiplier ``-energies[k]``.
    """
    opts = opts or SolveOptions()
    D = check_real_symmetric(D, name="D")
    E = check_real_symmetric(E, name="E")
    if D.shape != E.shape:
        raise ShapeMismatch(f"D is {D.shape}, E is {E.shape}")
    T, _ = _truncated_whitener(E, opts.e_truncation_rel, opts.max_sweeps)
    W = T.T @ D @ T
    W = (W + W.T) / 2.0
    mu, U = jacobi_eigh(W, max_sweeps=opts.max_sweeps)
    alphas = T @ U
    for k in range(alphas.shape[1]):
        a = alphas[:, k]
        a = a / np.sqrt(a @ E @ a)
        if a[int(np.argmax(np.abs(a)))] < 0.0:
            a = -a
        alphas[:, k] = a
    return mu.copy(), alphas


def kkt_residuals(D, E, alpha, lam):
    """First-order residuals of a candidate (alpha, lambda) pair.

    Returns the stationarity norm ||(D + lambda*E) alpha||, the feasibility
    gap |alpha^T E alpha - 1| and the multiplier gap |alpha^T D alpha + lambda|.
    """
    D = check_real_symmetric(D, name="D")
    E = check_real_symmetric(E, name="E")
    alpha = check_vector(np.asarray(alpha, dtype=float), size=D.shape[0], name="alpha")
    if D.shape != E.shape:
        raise ShapeMismatch(f"D is {D.shape}, E is {E.shape}")
    stationarity = float(np.linalg.norm((D + lam * E) @ alpha))
    feasibility = float(abs(alpha @ E @ alpha - 1.0))
    multiplier_gap = float(abs(alpha @ D @ alpha + lam))
    return stationarity, feasibility, multiplier_gap


def _tangent_basis(v):
    """Orthonormal basis of the hyperplane orthogonal to v (Gram-Schmidt)."""
    m = v.shape[0]
    u = v / np.linalg.norm(v)
    basis = [u]
    for i in range(m):
        cand = np.zeros(m)
        cand[i] = 1.0
        for b in basis:
            cand = cand - (b @ cand) * b
        norm = np.linalg.norm(cand)
        if norm > 1e-10:
            basis.append(cand / norm)
        if len(basis) == m:
            break
    return np.column_stack(basis[1:]) if len(basis) > 1 else np.zeros((m, 0))


def second_order_check(D, E, alpha, lam, psd_tol=1e-9):
    """Curvature test on the tangent plane of the constraint shell.

    True iff the certificate matrix restricted to {y : (E alpha)^T y = 0}
    has smallest eigenvalue >= -psd_tol.
    """
    D = check_real_symmetric(D, name="D")
    E = check_real_symmetric(E, name="E")
    if D.shape != E.shape:
        raise ShapeMismatch(f"D is {D.shape}, E is {E.shape}")
    alpha = check_vector(np.asarray(alpha, dtype=float), size=D.shape[0], name="alpha")
    grad = E @ alpha
    scale = max(1.0, float(np.max(np.abs(E))))
    if np.linalg.norm(grad) <= 1e-14 * scale:
        raise DegenerateConstraint("constraint gradient is numerically zero")
    B = _tangent_basis(grad)
    if B.shape[1] == 0:
        return True
    reduced = B.T @ (D + lam * E) @ B
    reduced = (reduced + reduced.T) / 2.0
    values, _ = jacobi_eigh(reduced)
    return bool(values[0] >= -psd_tol)


def certify_global(D, E, lam, psd_tol=1e-9):
    """Sufficient global-optimality test: D + lambda*E is PSD.

    Any stationary point passing this test attains the global minimum, so a
    solver may stop as soon as it holds.
    """
    D = check_real_symmetric(D, name="D")
    E = check_real_symmetric(E, name="E")
    if D.shape != E.shape:
        raise ShapeMismatch(f"D is {D.shape}, E is {E.shape}")
    values, _ = jacobi_eigh(D + lam * E)
    return bool(values[0] >= -psd_tol * max(1.0, float(np.max(np.abs(D)))))


# ---------------------------------------------------------------------------
# Independent verification oracle.  Deliberately shares no eigensolver code
# with the solve path above: column-major sweep order and the explicit-angle
# rotation kernel.
# ---------------------------------------------------------------------------

ORACLE_MAX_DIM = 16


def _jacobi_eigh_colmajor(A, max_sweeps=100):
    A = np.array(A, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V
    norm = np.linalg.norm(A)
    if norm == 0.0:
        return np.zeros(n), V
    for _ in range(max_sweeps):
        if _off_diagonal_norm(A) <= _OFF_DIAG_EPS * norm:
            break
        for q in range(1, n):
            for p in range(q):
                apq = A[p, q]
                if abs(apq) <= _OFF_DIAG_EPS * norm / n:
                    continue
                theta = 0.5 * np.arctan2(2.0 * apq, A[p, p] - A[q, q])
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = -s
                rot[q, p] = s
                A = rot.T @ A @ rot
                A[p, q] = A[q, p] = 0.0
                V = V @ rot
    values = A.diagonal().copy()
    order = np.argsort(values, kind="stable")
    return values[order], V[:, order]


def oracle_min(D, E, rel_cutoff=1e-10):
    """Smallest constrained value, recomputed along an independent route.

    Column-major Jacobi on E, explicit whitening by matrix products, then
    column-major Jacobi on the whitened matrix.  Capped at m <= 16.
    """
    D = check_real_symmetric(D, name="D")
    E = check_real_symmetric(E, name="E")
    if D.shape != E.shape:
        raise ShapeMismatch(f"D is {D.shape}, E is {E.shape}")
    if D.shape[0] > ORACLE_MAX_DIM:
        raise OracleSizeExceeded(f"oracle capped at m={ORACLE_MAX_DIM}")
    lam, Q = _jacobi_eigh_colmajor(E)
    lam_max = lam[-1]
    if lam_max <= 0.0:
        raise DegenerateConstraint("constraint matrix is numerically zero")
    keep = lam > rel_cutoff * lam_max
    if not np.any(keep):
        raise DegenerateConstraint("no constraint eigenvalue above truncation cutoff")
    B = Q[:, keep] @ np.diag(lam[keep] ** -0.5)
    W = B.T @ D @ B
    W = (W + W.T) / 2.0
    values, _ = _jacobi_eigh_colmajor(W)
    return float(values[0])


# ---------------------------------------------------------------------------
# Matrix-pair text format for standalone solves.
# ---------------------------------------------------------------------------


def dump_matrix_pair(D, E):
    """Serialize (D, E) in the standalone matrix format.

    Real pairs: first line ``m``, then m rows of D, a blank line, m rows of
    E.  Complex pairs start with a ``COMPLEX`` header line and interleave
    real and imaginary parts within each row.
    """
    D = np.asarray(D)
    E = np.asarray(E)
    if D.shape != E.shape or D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ShapeMismatch("D and E must be square with equal shapes")
    m = D.shape[0]
    is_complex = np.iscomplexobj(D) or np.iscomplexobj(E)

    def fmt_row(row):
        if is_complex:
            parts = []
            for z in row:
                z = complex(z)
                parts.extend((repr(z.real), repr(z.imag)))
            return " ".join(parts)
        return " ".join(repr(float(x)) for x in row)

    lines = []
    if is_complex:
        lines.append("COMPLEX")
    lines.append(str(m))
    lines.extend(fmt_row(D[i]) for i in range(m))
    lines.append("")
    lines.extend(fmt_row(E[i]) for i in range(m))
    return "\n".join(lines) + "\n"


def load_matrix_pair(text):
    """Parse the standalone matrix format back into (D, E)."""
    lines = text.splitlines()
    pos = 0

    def next_content():
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            raise ParseError("unexpected end of matrix file")
        pos += 1
        return lines[pos - 1].strip(), pos

    header, lineno = next_content()
    is_complex = header.upper() == "COMPLEX"
    if is_complex:
        header, lineno = next_content()
    try:
        m = int(header)
    except ValueError:
        raise ParseError(f"expected matrix size, got {header!r}", line=lineno) from None
    if m < 1:
        raise ParseError(f"matrix size must be positive, got {m}", line=lineno)

    def read_matrix():
        rows = []
        for _ in range(m):
            line, lineno = next_content()
            fields = line.split()
            want = 2 * m if is_complex else m
            if len(fields) != want:
                raise ParseError(
                    f"expected {want} numbers per row, got {len(fields)}", line=lineno
                )
            try:
                nums = [float(f) for f in fields]
            except ValueError:
                raise ParseError(f"bad number in row {line!r}", line=lineno) from None
            if is_complex:
                rows.append([complex(nums[2 * i], nums[2 * i + 1]) for i in range(m)])
            else:
                rows.append(nums)
        dtype = complex if is_complex else float
        return np.array(rows, dtype=dtype)

    D = read_matrix()
    E = read_matrix()
    return D, E
