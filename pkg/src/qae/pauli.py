"""Hamiltonians as weighted sums of Pauli strings.

A Hamiltonian is stored as a list of (coefficient, PauliString) terms and is
applied to statevectors by index/bit manipulation, so no dense matrix is ever
materialized on the hot path.  A dense builder is provided as a test oracle
for small qubit counts.

Qubit ordering convention: the leftmost label of a Pauli string acts on
qubit 0, which corresponds to the MOST significant bit of the basis-state
index (so ``|1,1>`` on two qubits is amplitude index 3).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyHamiltonian,
    OracleSizeExceeded,
    ParseError,
    ShapeMismatch,
)
from .validation import check_state_vector

PAULI_LABELS = "IXYZ"

_SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Keep the dense oracle well inside desk-scale memory.
DENSE_ORACLE_MAX_QUBITS = 10


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Pauli operators, e.g. ``ZIX``."""

    ops: str

    def __post_init__(self):
        if not self.ops:
            raise ParseError("Pauli string must have at least one label")
        bad = set(self.ops) - set(PAULI_LABELS)
        if bad:
            raise ParseError(f"invalid Pauli labels {sorted(bad)!r} in {self.ops!r}")

    @property
    def num_qubits(self):
        return len(self.ops)

    def __str__(self):
        return self.ops


@dataclass(frozen=True)
class Hamiltonian:
    """Weighted sum of Pauli strings over a fixed qubit count.

    Terms are stored in canonical form: duplicate strings merged with summed
    coefficients, sorted lexicographically by string.  Coefficients may be
    complex; :meth:`is_hermitian` reports whether the operator has a real
    spectrum (true exactly when every coefficient is real, since Pauli
    strings are Hermitian).
    """

    num_qubits: int
    terms: tuple  # of (complex, PauliString)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ShapeMismatch("qubit count must be positive")
        if not self.terms:
            raise EmptyHamiltonian("Hamiltonian has no terms")
        for _, string in self.terms:
            if string.num_qubits != self.num_qubits:
                raise ShapeMismatch(
                    f"term {string} has {string.num_qubits} labels, "
                    f"expected {self.num_qubits}"
                )

    @classmethod
    def from_terms(cls, terms, num_qubits=None):
        """Build in canonical form from (coefficient, label-string) pairs."""
        merged = {}
        for beta, string in terms:
            if isinstance(string, PauliString):
                string = string.ops
            merged[string] = merged.get(string, 0j) + complex(beta)
        if num_qubits is None:
            if not merged:
                raise EmptyHamiltonian("Hamiltonian has no terms")
            num_qubits = len(next(iter(merged)))
        canon = tuple(
            (merged[ops], PauliString(ops)) for ops in sorted(merged)
        )
        return cls(num_qubits, canon)

    def is_hermitian(self, tol=1e-12):
        return all(
            abs(beta.imag) <= tol * max(1.0, abs(beta)) for beta, _ in self.terms
        )

    def to_text(self):
        """Serialize in the parseable one-term-per-line format."""
        lines = [
            f"{beta.real!r} {beta.imag!r} {string.ops}"
            for beta, string in self.terms
        ]
        return "\n".join(lines) + "\n"

    def __str__(self):
        return " + ".join(f"({beta:g})*{s}" for beta, s in self.terms)


def parse_hamiltonian(text):
    """Parse the ``<re> <im> <LABELS>`` one-term-per-line format.

    ``#`` starts a comment and blank lines are ignored.  Terms are merged and
    sorted so any two texts describing the same operator parse to the same
    Hamiltonian.
    """
    terms = []
    num_qubits = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(
                f"expected '<re> <im> <LABELS>', got {raw.strip()!r}", line=lineno
            )
        re_s, im_s, labels = parts
        try:
            beta = complex(float(re_s), float(im_s))
        except ValueError:
            raise ParseError(f"bad coefficient {re_s!r} {im_s!r}", line=lineno) from None
        if set(labels) - set(PAULI_LABELS):
            raise ParseError(f"unknown Pauli label in {labels!r}", line=lineno)
        if num_qubits is None:
            num_qubits = len(labels)
        elif len(labels) != num_qubits:
            raise ShapeMismatch(
                f"line {lineno}: string {labels!r} has {len(labels)} labels, "
                f"previous terms have {num_qubits}"
            )
        terms.append((beta, labels))
    if not terms:
        raise EmptyHamiltonian("no Hamiltonian terms found in input")
    return Hamiltonian.from_terms(terms, num_qubits=num_qubits)


def _bit_parity(values):
    """Parity of the set bits of each entry of an integer array."""
    v = values.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def apply_pauli(string, state):
    """Apply a Pauli string to a statevector by bit manipulation.

    X flips the qubit's bit, Z signs it, Y flips it with a +/-i phase.  The
    input array is never modified.
    """
    if isinstance(string, PauliString):
        ops = string.ops
    else:
        ops = str(string)
    n = len(ops)
    state = check_state_vector(state, num_qubits=n)
    dim = 1 << n

    flip_mask = 0
    sign_mask = 0  # qubits contributing (-1)^bit: Z and Y positions
    n_y = 0
    for j, label in enumerate(ops):
        bit = 1 << (n - 1 - j)  # leftmost label <-> most significant bit
        if label == "X":
            flip_mask |= bit
        elif label == "Y":
            flip_mask |= bit
            sign_mask |= bit
            n_y += 1
        elif label == "Z":
            sign_mask |= bit

    idx = np.arange(dim, dtype=np.int64)
    phase = (1j) ** (n_y % 4)
    signs = 1.0 - 2.0 * _bit_parity(idx & sign_mask)
    out = np.empty(dim, dtype=complex)
    out[idx ^ flip_mask] = (phase * signs) * state
    return out


def apply_hamiltonian(h, state):
    """Return ``H |psi>`` as the coefficient-weighted sum over terms.

    Terms are accumulated in canonical (sorted) order so the floating-point
    result is deterministic.
    """
    state = check_state_vector(state, num_qubits=h.num_qubits)
    out = np.zeros_like(state, dtype=complex)
    for beta, string in h.terms:
        out += beta * apply_pauli(string, state)
    return out


def dense_matrix(h):
    """Dense 2^N x 2^N matrix of the Hamiltonian (test oracle, N <= 10)."""
    if h.num_qubits > DENSE_ORACLE_MAX_QUBITS:
        raise OracleSizeExceeded(
            f"dense oracle capped at {DENSE_ORACLE_MAX_QUBITS} qubits, "
            f"got {h.num_qubits}"
        )
    dim = 1 << h.num_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for beta, string in h.terms:
        term = np.eye(1, dtype=complex)
        for label in string.ops:
            term = np.kron(term, _SINGLE_QUBIT[label])
        out += beta * term
    return out
