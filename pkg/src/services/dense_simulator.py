"""Dense state-vector backend with the same interface as the tableau.

Supports arbitrary single- and two-qubit unitaries, so non-Clifford seed
states can be injected and checked against exact logical states. Qubit i
is bit ``n - 1 - i`` of a basis index.
"""

from collections.abc import Iterable, Sequence

import numpy as np

from src.models.dense_state import MAX_DENSE_QUBITS, DenseState, DenseUnitary
from src.models.measurement import Basis, MeasurementOutcome
from src.models.pauli_string import PauliString
from src.services.simulator import (
    CLIFFORD_GATES,
    CapacityError,
    IdentityMeasurementError,
    OutcomeStream,
    QubitIndexError,
    UnknownGateError,
    check_pauli,
    check_qubits,
)
from src.services.statevector import LETTER_MATRICES, apply_to_state, controlled_pauli_matrix

DETERMINISTIC_TOLERANCE = 1e-9

_GATE_MATRICES = {
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2),
    "S": np.diag([1, 1j]).astype(np.complex128),
    "X": LETTER_MATRICES["X"],
    "Y": LETTER_MATRICES["Y"],
    "Z": LETTER_MATRICES["Z"],
    "CNOT": controlled_pauli_matrix("Z", "X"),
    "CZ": controlled_pauli_matrix("Z", "Z"),
    "SWAP": np.eye(4, dtype=np.complex128)[[0, 2, 1, 3]],
}


class DenseSimulator:
    """State-vector simulator capped at 20 qubits."""

    def __init__(
        self,
        n: int,
        initial: Sequence[Basis] | Basis = Basis.ZERO,
        seed: int | None = 0,
        max_qubits: int = MAX_DENSE_QUBITS,
    ) -> None:
        """Prepare a product state.

        Raises:
            CapacityError: If n exceeds the cap
            QubitIndexError: If n < 1 or the basis list has the wrong length
        """
        if n > min(max_qubits, MAX_DENSE_QUBITS):
            raise CapacityError(f"dense simulator is capped at {max_qubits} qubits, got {n}")
        if n < 1:
            raise QubitIndexError(f"simulator needs at least one qubit, got n={n}")
        bases = [initial] * n if isinstance(initial, Basis) else list(initial)
        if len(bases) != n:
            raise QubitIndexError(f"expected {n} initial bases, got {len(bases)}")
        self.n = n
        self.rng_seed = seed
        self._stream = OutcomeStream(seed)
        self._indices = np.arange(2**n, dtype=np.int64)
        amps = np.zeros(2**n, dtype=np.complex128)
        amps[0] = 1.0
        self.amplitudes = amps
        for q, basis in enumerate(bases):
            if basis is Basis.PLUS:
                self.apply_gate("H", [q])

    @property
    def state(self) -> DenseState:
        return DenseState(self.n, self.amplitudes)

    # --- gates ---

    def apply_unitary(self, matrix: np.ndarray, qubits: Sequence[int]) -> None:
        """Apply an arbitrary unitary to the listed qubits."""
        qubits = list(qubits)
        check_qubits(qubits, self.n)
        u = DenseUnitary(len(qubits), matrix)
        self.amplitudes = apply_to_state(self.state, u, qubits).amplitudes

    def apply_gate(self, name: str, qubits: Sequence[int]) -> None:
        gate = name.upper()
        if gate not in CLIFFORD_GATES:
            raise UnknownGateError(f"unknown gate {name!r}; use apply_unitary for others")
        self.apply_unitary(_GATE_MATRICES[gate], qubits)

    def _pauli_image(self, p: PauliString) -> np.ndarray:
        """Amplitudes of ``p |psi>`` by index arithmetic."""
        n = self.n
        xmask = 0
        zmask = 0
        for q in range(n):
            bit = 1 << (n - 1 - q)
            if p.x[q]:
                xmask |= bit
            if p.z[q]:
                zmask |= bit
        masked = self._indices & zmask
        parity = np.zeros(masked.shape, dtype=np.int64)
        for b in range(n):
            parity ^= (masked >> b) & 1
        y_count = int(np.count_nonzero(p.x & p.z))
        factor = (1j) ** ((p.phase + y_count) % 4)
        out = np.empty_like(self.amplitudes)
        out[self._indices ^ xmask] = factor * np.where(parity == 1, -1, 1) * self.amplitudes
        return out

    def apply_pauli(self, p: PauliString) -> None:
        if p.n != self.n:
            raise QubitIndexError(f"Pauli acts on {p.n} qubits, simulator has {self.n}")
        self.amplitudes = self._pauli_image(p.unsigned())

    # --- measurement ---

    def force_outcomes(self, values: Iterable[int]) -> None:
        self._stream.force(values)

    def expectation(self, p: PauliString) -> float:
        check_pauli(p, self.n)
        return float(np.real(np.vdot(self.amplitudes, self._pauli_image(p))))

    def measure_pauli(self, p: PauliString) -> MeasurementOutcome:
        """Projective measurement of a Hermitian Pauli product.

        Raises:
            IdentityMeasurementError: If p is the identity
        """
        check_pauli(p, self.n)
        if p.is_identity():
            raise IdentityMeasurementError("cannot measure the identity")
        image = self._pauli_image(p)
        e = float(np.real(np.vdot(self.amplitudes, image)))
        if abs(e - 1.0) < DETERMINISTIC_TOLERANCE:
            return MeasurementOutcome(1, True, p)
        if abs(e + 1.0) < DETERMINISTIC_TOLERANCE:
            return MeasurementOutcome(-1, True, p)

        if abs(e) < DETERMINISTIC_TOLERANCE:
            value = self._stream.next_value()
        else:
            value = self._stream.next_born((1.0 + e) / 2.0)
        projected = (self.amplitudes + value * image) / 2.0
        norm = np.linalg.norm(projected)
        if norm < DETERMINISTIC_TOLERANCE:
            raise QubitIndexError(f"forced outcome {value} has zero probability")
        self.amplitudes = projected / norm
        return MeasurementOutcome(value, False, p)

    def reset_qubits(self, qubits: Iterable[int], basis: Basis = Basis.ZERO) -> None:
        qubits = list(qubits)
        check_qubits(qubits, self.n)
        flip = "X" if basis is Basis.ZERO else "Z"
        for q in qubits:
            outcome = self.measure_pauli(PauliString.from_sparse(self.n, {q: basis.letter}))
            if outcome.value == -1:
                self.apply_gate(flip, [q])

    def contains_stabilizer(self, p: PauliString) -> int | None:
        """+1 / -1 when ``<p> = +-1`` within tolerance, otherwise None."""
        e = self.expectation(p)
        if abs(e - 1.0) < DETERMINISTIC_TOLERANCE:
            return 1
        if abs(e + 1.0) < DETERMINISTIC_TOLERANCE:
            return -1
        return None
