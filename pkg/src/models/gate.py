"""Gate-level IR: gates, circuits and Pauli-product rotation terms."""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from src.models.pauli_string import PauliString


class GateKind(Enum):
    """Supported logical gates."""

    X = "X"
    Y = "Y"
    Z = "Z"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    H = "H"
    S = "S"
    T = "T"
    CNOT = "CNOT"
    CZ = "CZ"
    CPP = "CPP"

    @property
    def arity(self) -> int:
        return 2 if self in _TWO_QUBIT else 1

    @property
    def is_rotation(self) -> bool:
        return self in (GateKind.RX, GateKind.RY, GateKind.RZ)


_TWO_QUBIT = frozenset({GateKind.CNOT, GateKind.CZ, GateKind.CPP})
_PAULI_LETTERS = frozenset("XYZ")


@dataclass(frozen=True)
class GateIR:
    """One gate applied to logical qubits.

    Attributes:
        kind: Gate kind
        qubits: Ordered logical-qubit indices (control first for CNOT)
        angle: Rotation angle in radians, only for RX/RY/RZ
        paulis: (P1, P2) letters, only for CPP
    """

    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None
    paulis: tuple[str, str] | None = None

    def __post_init__(self) -> None:
        """Validate arity and parameters."""
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != self.kind.arity:
            raise ValueError(
                f"{self.kind.value} takes {self.kind.arity} qubit(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value} has duplicate operand q{self.qubits[0]}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"Qubit indices must be non-negative, got {self.qubits}")
        if self.kind.is_rotation and self.angle is None:
            raise ValueError(f"{self.kind.value} requires an angle")
        if not self.kind.is_rotation and self.angle is not None:
            raise ValueError(f"{self.kind.value} does not take an angle")
        if self.kind is GateKind.CPP:
            if self.paulis is None or len(self.paulis) != 2:  # noqa: PLR2004
                raise ValueError("CPP requires a (P1, P2) pair")
            if not set(self.paulis) <= _PAULI_LETTERS:
                raise ValueError(f"CPP letters must be X, Y or Z, got {self.paulis}")
        elif self.paulis is not None:
            raise ValueError(f"{self.kind.value} does not take a Pauli pair")

    def label(self) -> str:
        if self.kind.is_rotation:
            return f"{self.kind.value}({self.angle:g})"
        if self.kind is GateKind.CPP and self.paulis is not None:
            return f"C({self.paulis[0]},{self.paulis[1]})"
        return self.kind.value


@dataclass
class CircuitIR:
    """A logical circuit: qubit count plus an ordered gate list."""

    n_qubits: int
    gates: list[GateIR] = field(default_factory=list)

    def __post_init__(self) -> None:
        """Validate qubit indices against the declared register."""
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        for position, gate in enumerate(self.gates):
            for q in gate.qubits:
                if q >= self.n_qubits:
                    raise ValueError(
                        f"gate {position} ({gate.label()}) uses q{q}, "
                        f"but only {self.n_qubits} qubits are declared"
                    )


@dataclass(frozen=True)
class RotationTerm:
    """The Pauli-product rotation ``exp(-i * angle * P)`` on logical qubits.

    Attributes:
        pauli: Hermitian Pauli string with phase +1, one letter per entry of qubits
        angle: Rotation angle in radians
        qubits: Logical qubits the letters act on, in order
        pi_fraction: Exact angle / pi for the dyadic angles, otherwise None
    """

    pauli: PauliString
    angle: float
    qubits: tuple[int, ...]
    pi_fraction: Fraction | None = None

    def __post_init__(self) -> None:
        """Validate phase and qubit count."""
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.pauli.phase != 0:
            raise ValueError(f"Rotation Pauli must have phase +1, got {self.pauli.to_label()}")
        if self.pauli.n != len(self.qubits):
            raise ValueError(
                f"Rotation Pauli acts on {self.pauli.n} qubits but {len(self.qubits)} are named"
            )
        if self.pi_fraction is not None and not math.isclose(
            self.angle, float(self.pi_fraction) * math.pi, abs_tol=1e-15
        ):
            raise ValueError("angle disagrees with pi_fraction")

    @classmethod
    def dyadic(cls, label: str, fraction: Fraction, qubits: tuple[int, ...]) -> "RotationTerm":
        """Rotation by ``fraction * pi`` about the Pauli named by label."""
        return cls(
            PauliString.from_label(label), float(fraction) * math.pi, tuple(qubits), fraction
        )

    @classmethod
    def about(cls, label: str, angle: float, qubits: tuple[int, ...]) -> "RotationTerm":
        """Rotation by an arbitrary angle; dyadic angles are recognized."""
        fraction = Fraction(angle / math.pi).limit_denominator(64)
        if math.isclose(float(fraction) * math.pi, angle, abs_tol=1e-12):
            return cls.dyadic(label, fraction, qubits)
        return cls(PauliString.from_label(label), angle, tuple(qubits))

    @property
    def is_identity(self) -> bool:
        return self.pauli.is_identity()

    @property
    def is_clifford(self) -> bool:
        """Multiples of pi/4 are Clifford rotations."""
        if self.is_identity:
            return True
        if self.pi_fraction is None:
            return False
        return (self.pi_fraction * 4).denominator == 1

    @property
    def axis(self) -> str:
        """Letters of the rotation Pauli, e.g. ``"Z"`` or ``"ZX"``."""
        return self.pauli.to_label()[1:]

    def angle_text(self) -> str:
        if self.pi_fraction is None:
            return repr(self.angle)
        if self.pi_fraction == 0:
            return "0"
        num, den = self.pi_fraction.numerator, self.pi_fraction.denominator
        head = "pi" if abs(num) == 1 else f"{abs(num)}pi"
        sign = "-" if num < 0 else ""
        return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"

    def label(self) -> str:
        qubits = ",".join(f"q{q}" for q in self.qubits)
        return f"{self.axis}_{{{self.angle_text()}}}@{qubits}"
