"""Error, decode-table and error-rate value types."""

import math
from dataclasses import dataclass, field

from src.models.patch import Cell
from src.models.pauli_string import PauliString

Correction = tuple[tuple[Cell, str], ...]


@dataclass(frozen=True)
class ErrorEvent:
    """A single-qubit Pauli error on a data cell.

    Attributes:
        location: Grid cell of the data qubit
        pauli: ``"X"``, ``"Y"`` or ``"Z"``
        round: Syndrome round the error precedes
    """

    location: Cell
    pauli: str
    round: int = 1

    def __post_init__(self) -> None:
        """Validate letter and round."""
        if self.pauli not in ("X", "Y", "Z"):
            raise ValueError(f"error Pauli must be X, Y or Z, got {self.pauli!r}")
        if self.round < 1:
            raise ValueError(f"round must be >= 1, got {self.round}")


@dataclass
class DecodeTable:
    """Syndrome bits -> minimum-weight correction for one patch shape.

    Syndrome bits follow the patch's check order; a bit is 1 where the
    check reads -1. Corrections list (cell, letter) pairs in cell order.
    """

    patch_id: str
    d: int
    check_ids: tuple[str, ...]
    max_weight: int
    entries: dict[tuple[int, ...], Correction] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, syndrome: tuple[int, ...]) -> Correction | None:
        if len(syndrome) != len(self.check_ids):
            raise ValueError(
                f"syndrome has {len(syndrome)} bits, table expects {len(self.check_ids)}"
            )
        return self.entries.get(tuple(syndrome))


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one decode.

    Attributes:
        syndrome: Bits that were decoded
        correction: Pauli applied to the simulator
        flagged: True when the syndrome had no table entry and a best-effort
            correction was used instead
    """

    syndrome: tuple[int, ...]
    correction: PauliString
    flagged: bool = False


@dataclass(frozen=True)
class RateEstimate:
    """Monte Carlo logical error rate of one patch at one physical rate."""

    d: int
    p: float
    trials: int
    failures: int
    seed: int
    flagged: int = 0

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        """Binomial standard error of the rate."""
        return math.sqrt(self.rate * (1 - self.rate) / self.trials)

    def to_row(self) -> dict:
        return {
            "d": self.d,
            "p": self.p,
            "trials": self.trials,
            "failures": self.failures,
            "rate": self.rate,
            "stderr": self.stderr,
            "seed": self.seed,
        }
