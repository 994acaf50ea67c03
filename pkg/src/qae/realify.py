"""Embedding of complex Hermitian problems into real symmetric ones.

A Hermitian matrix M = M_R + i M_I maps to the real symmetric block matrix
[[M_R, -M_I], [M_I, M_R]]; a complex vector maps to its stacked real and
imaginary parts.  The embedding preserves quadratic forms and positive
semidefiniteness, and doubles every eigenvalue's multiplicity, so the real
solver core never needs complex arithmetic.
"""

import numpy as np

from .errors import ShapeMismatch
from .validation import check_hermitian, check_vector


def realify_hermitian(M, tol=1e-8):
    """Map an m x m Hermitian matrix to its 2m x 2m real symmetric image.

    The input is re-Hermitized first; deviations beyond ``tol`` are an error.
    """
    M = check_hermitian(M, tol=tol)
    mr, mi = M.real, M.imag
    top = np.hstack([mr, -mi])
    bottom = np.hstack([mi, mr])
    return np.vstack([top, bottom])


def lift_vector(alpha):
    """Stack real and imaginary parts: C^m -> R^{2m}."""
    alpha = check_vector(np.asarray(alpha, dtype=complex), name="alpha")
    return np.concatenate([alpha.real, alpha.imag])


def project_solution(v):
    """Inverse of :func:`lift_vector`; exact round trip, no phase change."""
    v = check_vector(np.asarray(v, dtype=float), name="v")
    if v.shape[0] % 2:
        raise ShapeMismatch(f"realified vector length {v.shape[0]} is odd")
    m = v.shape[0] // 2
    return v[:m] + 1j * v[m:]


def canonicalize_phase(alpha):
    """Rotate a complex vector so its largest-magnitude entry is positive real.

    Realified solutions are phase-degenerate; this picks the reproducible
    representative.  Zero vectors are returned unchanged.
    """
    alpha = np.asarray(alpha, dtype=complex)
    idx = int(np.argmax(np.abs(alpha)))
    pivot = alpha[idx]
    if abs(pivot) == 0.0:
        return alpha.copy()
    return alpha * (np.conj(pivot) / abs(pivot))
