"""Shared generators for randomized test suites."""

import numpy as np


def random_symmetric(m, rng, scale=1.0):
    A = rng.normal(size=(m, m)) * scale
    return (A + A.T) / 2.0


def random_pd(m, rng, eig_low=0.1, eig_high=2.0):
    """Random symmetric matrix with spectrum inside [eig_low, eig_high]."""
    A = rng.normal(size=(m, m))
    Q, _ = np.linalg.qr(A)
    vals = rng.uniform(eig_low, eig_high, size=m)
    return (Q * vals) @ Q.T


def random_pencil(m, rng, e_min=0.1):
    """Random (D, E) pair with E positive definite."""
    return random_symmetric(m, rng), random_pd(m, rng, eig_low=e_min)


def random_hermitian(m, rng, scale=1.0):
    A = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return (A + A.conj().T) / 2.0 * scale


def random_hermitian_pd(m, rng, shift=0.1):
    G = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return G @ G.conj().T / m + shift * np.eye(m)


def random_state(n_qubits, rng):
    dim = 1 << n_qubits
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)
