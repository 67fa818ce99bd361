"""Measurement outcome and reset-basis value types."""

from dataclasses import dataclass
from enum import Enum

from src.models.pauli_string import PauliString


class Basis(Enum):
    """Single-qubit preparation basis."""

    ZERO = "0"
    PLUS = "+"

    @property
    def letter(self) -> str:
        """Pauli whose +1 eigenstate this basis prepares."""
        return "Z" if self is Basis.ZERO else "X"


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of measuring a Pauli product.

    Attributes:
        value: Eigenvalue observed, +1 or -1
        deterministic: True when the pre-measurement state fixed the value
        pauli_measured: The operator that was measured
    """

    value: int
    deterministic: bool
    pauli_measured: PauliString

    def __post_init__(self) -> None:
        """Validate the eigenvalue."""
        if self.value not in (1, -1):
            raise ValueError(f"Measurement value must be +1 or -1, got {self.value}")

    @property
    def bit(self) -> int:
        """0 for +1, 1 for -1."""
        return 0 if self.value == 1 else 1
