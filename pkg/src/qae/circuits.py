"""Statevector simulation of ansatz circuits and overlap-matrix assembly.

This plays the quantum computer for the first two pipeline stages: prepare
the combination states from gate lists, then fill the Hamiltonian-weighted
cross matrix D and the Gram matrix E, either exactly or under emulated
interference-test shot noise.
"""

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidShots,
    NonHermitianHamiltonian,
    ParseError,
    ShapeMismatch,
    SizeExceeded,
)
from .pauli import apply_pauli
from .validation import check_state_vector

GATE_KINDS = (
    "H", "X", "Y", "Z", "S", "SDG", "T", "TDG",
    "RX", "RY", "RZ", "CNOT", "CZ",
)
ROTATION_KINDS = ("RX", "RY", "RZ")
TWO_QUBIT_KINDS = ("CNOT", "CZ")

# Desk-scale statevector cap.
MAX_QUBITS = 20

_SQ = 1.0 / math.sqrt(2.0)
_FIXED_1Q = {
    "H": np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "TDG": np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
}


@dataclass(frozen=True)
class Gate:
    """One gate from the fixed 13-kind set.

    ``targets`` holds one qubit index, or (control, target) for CNOT/CZ.
    ``angle`` (radians) is present exactly for the rotation kinds.
    """

    kind: str
    targets: tuple
    angle: float = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ParseError(f"unknown gate kind {self.kind!r}")
        targets = tuple(int(q) for q in self.targets)
        object.__setattr__(self, "targets", targets)
        want = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(targets) != want:
            raise ShapeMismatch(
                f"{self.kind} takes {want} qubit(s), got {len(targets)}"
            )
        if want == 2 and targets[0] == targets[1]:
            raise ShapeMismatch(f"{self.kind} qubits must be distinct")
        if (self.angle is not None) != (self.kind in ROTATION_KINDS):
            raise ParseError(
                f"angle must be present exactly for {ROTATION_KINDS}, "
                f"got {self.kind} with angle={self.angle}"
            )

    def matrix(self):
        """2x2 matrix for single-qubit kinds."""
        if self.kind in _FIXED_1Q:
            return _FIXED_1Q[self.kind]
        half = self.angle / 2.0
        c, s = math.cos(half), math.sin(half)
        if self.kind == "RX":
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
        if self.kind == "RY":
            return np.array([[c, -s], [s, c]], dtype=complex)
        if self.kind == "RZ":
            return np.array(
                [[np.exp(-1j * half), 0], [0, np.exp(1j * half)]], dtype=complex
            )
        raise ShapeMismatch(f"{self.kind} has no single-qubit matrix")


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list preparing one ansatz state from the all-zeros ket."""

    num_qubits: int
    gates: tuple

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ShapeMismatch("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            for q in gate.targets:
                if not 0 <= q < self.num_qubits:
                    raise ShapeMismatch(
                        f"gate {gate.kind} targets qubit {q}, "
                        f"circuit has {self.num_qubits}"
                    )


@dataclass(frozen=True)
class AnsatzSet:
    """The ordered list of state-preparation circuits spanning the ansatz."""

    circuits: tuple

    def __post_init__(self):
        circuits = tuple(self.circuits)
        object.__setattr__(self, "circuits", circuits)
        if not circuits:
            raise ShapeMismatch("ansatz needs at least one circuit")
        n = circuits[0].num_qubits
        for c in circuits[1:]:
            if c.num_qubits != n:
                raise ShapeMismatch("all ansatz circuits must share a qubit count")

    @property
    def num_qubits(self):
        return self.circuits[0].num_qubits

    def __len__(self):
        return len(self.circuits)


@dataclass(frozen=True)
class ShotMeta:
    """Record of the sampling configuration used to build noisy matrices."""

    shots: int
    seed: int


@dataclass(frozen=True)
class OverlapPair:
    """The two matrices handed to the classical stage.

    ``D`` is the Hamiltonian-weighted cross matrix, ``E`` the Gram matrix of
    the ansatz states.  ``shot_meta`` is None for exact builds.
    """

    D: np.ndarray
    E: np.ndarray
    shot_meta: ShotMeta = field(default=None)


def prepare_state(circuit):
    """Run the circuit on the all-zeros ket and return the statevector."""
    n = circuit.num_qubits
    if n > MAX_QUBITS:
        raise SizeExceeded(f"statevector simulation capped at {MAX_QUBITS} qubits")
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1.0
    for gate in circuit.gates:
        psi = _apply_gate(psi, gate)
    return psi.reshape(-1)


def _apply_gate(psi, gate):
    # psi has shape (2,)*n; axis j is qubit j (MSB-first ravel order).
    if gate.kind == "CNOT":
        control, target = gate.targets
        sel = [slice(None)] * psi.ndim
        sel[control] = 1
        sel = tuple(sel)
        axis = target if target < control else target - 1
        psi[sel] = np.flip(psi[sel], axis=axis).copy()
        return psi
    if gate.kind == "CZ":
        control, target = gate.targets
        sel = [slice(None)] * psi.ndim
        sel[control] = 1
        sel[target] = 1
        psi[tuple(sel)] *= -1.0
        return psi
    (q,) = gate.targets
    out = np.tensordot(gate.matrix(), psi, axes=([1], [q]))
    return np.moveaxis(out, 0, q)


def overlap(a, b):
    """Inner product <a|b>, conjugate-linear in the first argument."""
    a = check_state_vector(a, name="a")
    b = check_state_vector(b, name="b")
    if a.shape != b.shape:
        raise ShapeMismatch(f"state dimensions differ: {a.shape[0]} vs {b.shape[0]}")
    return complex(np.vdot(a, b))


def hadamard_estimate(a, b, shots, seed):
    """Shot-noise emulation of an interference-test estimate of <a|b>.

    The real part is estimated as 2k/shots - 1 with k binomial at success
    probability (1 + Re<a|b>)/2; the imaginary part uses an independent
    binomial draw.  The estimator is unbiased and deterministic given the
    seed.  ``shots=None`` is the infinite-shot switch and returns the exact
    overlap.
    """
    z = overlap(a, b)
    if shots is None:
        return z
    shots = int(shots)
    if shots < 1:
        raise InvalidShots(f"shots must be >= 1, got {shots}")
    if abs(z) >= 1.0 - 1e-14:
        # unit-magnitude overlap: the states coincide up to phase and the
        # interference outcome is certain, so any shot count is exact
        return z
    rng = np.random.default_rng(seed)
    p_re = min(1.0, max(0.0, (1.0 + z.real) / 2.0))
    p_im = min(1.0, max(0.0, (1.0 + z.imag) / 2.0))
    k_re = rng.binomial(shots, p_re)
    k_im = rng.binomial(shots, p_im)
    return complex(2.0 * k_re / shots - 1.0, 2.0 * k_im / shots - 1.0)


def _check_build_inputs(hamiltonian, ansatz):
    if hamiltonian.num_qubits != ansatz.num_qubits:
        raise ShapeMismatch(
            f"Hamiltonian acts on {hamiltonian.num_qubits} qubits, "
            f"ansatz on {ansatz.num_qubits}"
        )
    if not hamiltonian.is_hermitian():
        raise NonHermitianHamiltonian(
            "overlap builders require real Pauli coefficients"
        )


def _warn_on_duplicate_states(states):
    # Distinctness of the ansatz states is an assumption, not a hard error.
    m = len(states)
    for j in range(m):
        for k in range(j + 1, m):
            if abs(1.0 - np.vdot(states[j], states[k])) <= 1e-10:
                warnings.warn(
                    f"ansatz states {j} and {k} coincide (overlap 1); "
                    "the constraint matrix will be rank-deficient",
                    stacklevel=3,
                )


def _num_workers(workers):
    if workers is None:
        workers = int(os.environ.get("QAE_THREADS", "0") or 0)
    return max(0, int(workers))


def build_overlap_matrices(hamiltonian, ansatz, workers=None):
    """Exact D and E from statevector simulation.

    Only the upper triangle is computed; the lower triangle is the mirrored
    conjugate, so both matrices are Hermitian by construction.
    """
    _check_build_inputs(hamiltonian, ansatz)
    states = [prepare_state(c) for c in ansatz.circuits]
    _warn_on_duplicate_states(states)
    m = len(states)
    # H|phi_k> once per column; terms summed in canonical order.
    h_states = [
        sum(beta * apply_pauli(s, psi) for beta, s in hamiltonian.terms)
        for psi in states
    ]

    D = np.zeros((m, m), dtype=complex)
    E = np.zeros((m, m), dtype=complex)
    pairs = [(j, k) for j in range(m) for k in range(j, m)]

    def fill(pair):
        j, k = pair
        D[j, k] = np.vdot(states[j], h_states[k])
        E[j, k] = np.vdot(states[j], states[k])

    n_workers = _num_workers(workers)
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(fill, pairs))
    else:
        for pair in pairs:
            fill(pair)

    for j in range(m):
        for k in range(j + 1, m):
            D[k, j] = np.conj(D[j, k])
            E[k, j] = np.conj(E[j, k])
    # diagonals of Hermitian forms are real; drop the roundoff residue
    np.fill_diagonal(D, D.diagonal().real)
    np.fill_diagonal(E, E.diagonal().real)
    return OverlapPair(D=D, E=E)


def _entry_seed(seed, tag, i, j, k):
    # Independent per-entry streams; parallel builds must match serial ones.
    return np.random.SeedSequence(
        entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(tag, i, j, k)
    )


def build_overlap_matrices_sampled(hamiltonian, ansatz, shots, seed, workers=None):
    """D and E with every matrix element replaced by a shot-noise estimate.

    Each (term, row, column) element is estimated from its own seeded stream,
    every entry of the full matrix is measured independently (both triangles),
    and the assembled matrices are re-Hermitized as (M + M^dagger)/2.  The
    Gram diagonal is pinned to 1, which is known a priori.  ``shots=None``
    degenerates to the exact builder result.
    """
    _check_build_inputs(hamiltonian, ansatz)
    if shots is not None and int(shots) < 1:
        raise InvalidShots(f"shots must be >= 1, got {shots}")
    states = [prepare_state(c) for c in ansatz.circuits]
    _warn_on_duplicate_states(states)
    m = len(states)
    terms = hamiltonian.terms
    u_states = [
        [apply_pauli(s, psi) for _, s in terms] for psi in states
    ]

    D = np.zeros((m, m), dtype=complex)
    E = np.zeros((m, m), dtype=complex)

    def fill(pair):
        j, k = pair
        d_jk = 0j
        for i, (beta, _) in enumerate(terms):
            d_jk += beta * hadamard_estimate(
                states[j], u_states[k][i], shots, _entry_seed(seed, 0, i, j, k)
            )
        D[j, k] = d_jk
        if j == k:
            E[j, k] = 1.0
        else:
            E[j, k] = hadamard_estimate(
                states[j], states[k], shots, _entry_seed(seed, 1, 0, j, k)
            )

    pairs = [(j, k) for j in range(m) for k in range(m)]
    n_workers = _num_workers(workers)
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(fill, pairs))
    else:
        for pair in pairs:
            fill(pair)

    D = (D + D.conj().T) / 2.0
    E = (E + E.conj().T) / 2.0
    np.fill_diagonal(E, 1.0)
    meta = None if shots is None else ShotMeta(shots=int(shots), seed=int(seed))
    return OverlapPair(D=D, E=E, shot_meta=meta)


def parse_ansatz(text, num_qubits=None):
    """Parse the gate-list ansatz format.

    States are separated by ``---`` lines; each gate line is
    ``KIND q [q2] [angle]`` with angles in radians.  ``#`` comments and blank
    lines are ignored.  When ``num_qubits`` is omitted it is inferred as one
    plus the largest qubit index in the file.
    """
    blocks = [[]]
    gate_lines = [[]]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if set(line) == {"-"} and len(line) >= 3:
            blocks.append([])
            gate_lines.append([])
            continue
        parts = line.split()
        kind = parts[0].upper()
        if kind not in GATE_KINDS:
            raise ParseError(f"unknown gate kind {parts[0]!r}", line=lineno)
        want_qubits = 2 if kind in TWO_QUBIT_KINDS else 1
        want_angle = 1 if kind in ROTATION_KINDS else 0
        if len(parts) != 1 + want_qubits + want_angle:
            raise ParseError(
                f"{kind} expects {want_qubits} qubit(s)"
                + (" and an angle" if want_angle else ""),
                line=lineno,
            )
        try:
            qubits = tuple(int(p) for p in parts[1 : 1 + want_qubits])
            angle = float(parts[-1]) if want_angle else None
        except ValueError:
            raise ParseError(f"bad gate arguments in {raw.strip()!r}", line=lineno) from None
        if any(q < 0 for q in qubits):
            raise ParseError("qubit indices must be non-negative", line=lineno)
        blocks[-1].append(Gate(kind=kind, targets=qubits, angle=angle))
        gate_lines[-1].append(lineno)

    if num_qubits is None:
        used = [q for block in blocks for g in block for q in g.targets]
        if not used:
            raise ParseError("cannot infer qubit count from an empty ansatz file")
        num_qubits = max(used) + 1

    circuits = []
    for block, lines in zip(blocks, gate_lines):
        for gate, lineno in zip(block, lines):
            if max(gate.targets) >= num_qubits:
                raise ShapeMismatch(
                    f"line {lineno}: gate {gate.kind} targets qubit "
                    f"{max(gate.targets)}, ansatz has {num_qubits} qubits"
                )
        circuits.append(Circuit(num_qubits=num_qubits, gates=tuple(block)))
    return AnsatzSet(circuits=tuple(circuits))


def ansatz_to_text(ansatz):
    """Serialize an AnsatzSet in the parseable gate-list format."""
    chunks = []
    for circuit in ansatz.circuits:
        lines = []
        for g in circuit.gates:
            fields = [g.kind] + [str(q) for q in g.targets]
            if g.angle is not None:
                fields.append(repr(float(g.angle)))
            lines.append(" ".join(fields))
        chunks.append("\n".join(lines))
    return ("\n---\n").join(chunks) + "\n"
