"""Input validation helpers used across the package.

All helpers return validated (and possibly symmetrized) numpy arrays, raising
package exceptions instead of bare ValueErrors so callers and the CLI can
classify failures.
"""

import numpy as np

from .errors import NotSymmetric, ShapeMismatch


def check_square(M, name="matrix"):
    """Coerce to a 2-d square ndarray."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {M.shape}")
    return M


def check_vector(v, size=None, name="vector"):
    v = np.asarray(v)
    if v.ndim != 1:
        raise ShapeMismatch(f"{name} must be 1-d, got shape {v.shape}")
    if size is not None and v.shape[0] != size:
        raise ShapeMismatch(f"{name} must have length {size}, got {v.shape[0]}")
    return v


def check_real_symmetric(M, tol=1e-8, name="matrix"):
    """Validate a real symmetric matrix and return its symmetrized copy."""
    M = check_square(M, name)
    if np.iscomplexobj(M):
        if np.max(np.abs(M.imag)) > tol:
            raise NotSymmetric(f"{name} has non-negligible imaginary part")
        M = M.real
    M = M.astype(float, copy=True)
    dev = np.max(np.abs(M - M.T)) if M.size else 0.0
    if dev > tol:
        raise NotSymmetric(f"{name} deviates from symmetry by {dev:.3e} (tol {tol:.1e})")
    return (M + M.T) / 2.0


def check_hermitian(M, tol=1e-8, name="matrix"):
    """Validate a complex Hermitian matrix and return its re-Hermitized copy."""
    M = check_square(M, name)
    M = M.astype(complex, copy=True)
    dev = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    if dev > tol:
        raise NotSymmetric(f"{name} deviates from Hermiticity by {dev:.3e} (tol {tol:.1e})")
    return (M + M.conj().T) / 2.0


def is_effectively_real(M, tol=1e-12):
    """True when the imaginary part is negligible relative to the real scale."""
    M = np.asarray(M)
    if not np.iscomplexobj(M):
        return True
    scale = max(1.0, float(np.max(np.abs(M.real))) if M.size else 1.0)
    return float(np.max(np.abs(M.imag))) <= tol * scale


def check_state_vector(psi, num_qubits=None, name="state"):
    """Validate a statevector; optionally check it matches a qubit count."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ShapeMismatch(f"{name} must be 1-d, got shape {psi.shape}")
    dim = psi.shape[0]
    if dim == 0 or dim & (dim - 1):
        raise ShapeMismatch(f"{name} length {dim} is not a power of two")
    if num_qubits is not None and dim != 1 << num_qubits:
        raise ShapeMismatch(
            f"{name} length {dim} does not match {num_qubits} qubits"
        )
    return psi
