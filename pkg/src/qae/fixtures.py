"""Built-in problem instances: the two-qubit demo and seeded random ones."""

import numpy as np

from .circuits import AnsatzSet, Circuit, Gate, ansatz_to_text, parse_ansatz
from .pauli import Hamiltonian, parse_hamiltonian

# Two-qubit hydrogen-molecule model: 0.4*(ZI + IZ) + 0.2*XX.  Its ground
# energy is -sqrt(0.68) ~= -0.8246211251235321.
H2_HAMILTONIAN_TEXT = "0.4 0 ZI\n0.4 0 IZ\n0.2 0 XX\n"

# Combination states |1,1>, |+,->, |-,+>.
H2_ANSATZ_TEXT = """\
X 0
X 1
---
H 0
X 1
H 1
---
X 0
H 0
H 1
"""

H2_GROUND_ENERGY = -float(np.sqrt(0.68))


def h2_hamiltonian():
    return parse_hamiltonian(H2_HAMILTONIAN_TEXT)


def h2_ansatz():
    return parse_ansatz(H2_ANSATZ_TEXT, num_qubits=2)


def random_instance(m, num_qubits, seed):
    """Reproducible random Hamiltonian + ansatz pair.

    The Hamiltonian gets real coefficients on distinct random Pauli strings;
    each ansatz circuit is a few layers of seeded single-qubit rotations with
    an entangling chain, so overlaps are generically complex.
    """
    if m < 1 or num_qubits < 1:
        raise ValueError("m and num_qubits must be positive")
    rng = np.random.default_rng(seed)

    n_terms = int(rng.integers(2, 7))
    strings = set()
    while len(strings) < n_terms:
        strings.add("".join(rng.choice(list("IXYZ"), size=num_qubits)))
    terms = [(float(rng.normal()), s) for s in sorted(strings)]
    hamiltonian = Hamiltonian.from_terms(terms, num_qubits=num_qubits)

    circuits = []
    for _ in range(m):
        gates = []
        for _layer in range(3):
            for q in range(num_qubits):
                kind = str(rng.choice(["RX", "RY", "RZ"]))
                gates.append(
                    Gate(kind=kind, targets=(q,), angle=float(rng.uniform(0, 2 * np.pi)))
                )
            for q in range(num_qubits - 1):
                gates.append(Gate(kind="CNOT", targets=(q, q + 1)))
        circuits.append(Circuit(num_qubits=num_qubits, gates=tuple(gates)))
    ansatz = AnsatzSet(circuits=tuple(circuits))
    return hamiltonian, ansatz


def instance_texts(hamiltonian, ansatz):
    """Serialized forms of an instance, e.g. for report digests."""
    return hamiltonian.to_text(), ansatz_to_text(ansatz)
