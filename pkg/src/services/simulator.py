"""Backend-neutral simulator interface and shared errors.

Surgery and protocol code runs against this interface so that the same
procedure executes on the stabilizer tableau and on the dense reference
simulator.
"""

from collections import deque
from collections.abc import Iterable, Sequence
from typing import Protocol

import numpy as np

from src.models.measurement import Basis, MeasurementOutcome
from src.models.pauli_string import PauliString

CLIFFORD_GATES = frozenset({"H", "S", "CNOT", "CZ", "X", "Y", "Z", "SWAP"})


class SimulatorError(Exception):
    """Base exception for simulator errors."""


class QubitIndexError(SimulatorError):
    """Raised when a qubit index is out of range or repeated."""


class CapacityError(SimulatorError):
    """Raised when a register exceeds what a backend can hold."""


class IdentityMeasurementError(SimulatorError):
    """Raised when asked to measure the identity."""


class UnknownGateError(SimulatorError):
    """Raised for gate names outside the backend's gate set."""


class Simulator(Protocol):
    """Operations every backend provides."""

    n: int

    def apply_gate(self, name: str, qubits: Sequence[int]) -> None: ...

    def apply_pauli(self, p: PauliString) -> None: ...

    def measure_pauli(self, p: PauliString) -> MeasurementOutcome: ...

    def reset_qubits(self, qubits: Iterable[int], basis: Basis = Basis.ZERO) -> None: ...

    def contains_stabilizer(self, p: PauliString) -> int | None: ...

    def force_outcomes(self, values: Iterable[int]) -> None: ...


class OutcomeStream:
    """Seeded source of random measurement outcomes.

    One ``integers(2)`` draw per random outcome, in measurement order.
    Forced values, when queued, are consumed before the generator.
    """

    def __init__(self, seed: int | None) -> None:
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self._forced: deque[int] = deque()
        self.draws = 0

    def force(self, values: Iterable[int]) -> None:
        for value in values:
            if value not in (1, -1):
                raise ValueError(f"Forced outcome must be +1 or -1, got {value}")
            self._forced.append(value)

    def copy(self) -> "OutcomeStream":
        """Independent stream that continues from the current generator state."""
        clone = OutcomeStream(self.seed)
        clone._rng.bit_generator.state = self._rng.bit_generator.state
        clone._forced = deque(self._forced)
        clone.draws = self.draws
        return clone

    @property
    def pending_forced(self) -> int:
        return len(self._forced)

    def next_value(self) -> int:
        self.draws += 1
        if self._forced:
            return self._forced.popleft()
        return 1 if int(self._rng.integers(2)) == 0 else -1

    def next_born(self, p_plus: float) -> int:
        """Outcome with probability p_plus of +1 (non-uniform dense branches)."""
        self.draws += 1
        if self._forced:
            return self._forced.popleft()
        return 1 if float(self._rng.random()) < p_plus else -1


def check_qubits(qubits: Sequence[int], n: int) -> None:
    """Validate that qubits are distinct and inside ``range(n)``.

    Raises:
        QubitIndexError: On a repeated or out-of-range index
    """
    if len(set(qubits)) != len(qubits):
        raise QubitIndexError(f"qubit indices must be distinct, got {list(qubits)}")
    for q in qubits:
        if not 0 <= q < n:
            raise QubitIndexError(f"qubit index {q} out of range for n={n}")


def check_pauli(p: PauliString, n: int) -> None:
    """Validate width and hermiticity of a Pauli to be measured or queried."""
    if p.n != n:
        raise QubitIndexError(f"Pauli acts on {p.n} qubits, simulator has {n}")
    if not p.is_hermitian:
        raise SimulatorError(f"{p.to_label()} is not Hermitian")
