"""Surgery schedule value types."""

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from src.models.gate import RotationTerm
from src.models.pauli_string import PauliString

_PI_ANGLE = re.compile(r"(-?)(\d*)pi(?:/(\d+))?$")


class ActionKind(Enum):
    """What a schedule action does."""

    INJECT = "inject"
    CNOT = "cnot"
    CZ = "cz"
    LOGICAL_PAULI = "logical_pauli"
    MEASURE = "measure"

    @property
    def uses_trn(self) -> bool:
        return self in (ActionKind.CNOT, ActionKind.CZ)


class TileKind(Enum):
    QUBIT = "qubit"
    TRN = "trn"


def qubit_tile(q: int) -> str:
    return f"q{q}"


def parse_angle(text: str | float | int) -> tuple[float, Fraction | None]:
    """Read ``"pi/8"``, ``"-3pi/4"``, ``"0"`` or a plain float.

    Raises:
        ValueError: If the text is neither
    """
    if isinstance(text, int | float):
        return float(text), None
    text = text.strip()
    if text == "0":
        return 0.0, Fraction(0)
    match = _PI_ANGLE.match(text)
    if match is not None:
        sign, num, den = match.groups()
        fraction = Fraction(int(num or 1), int(den or 1))
        if sign:
            fraction = -fraction
        return float(fraction) * math.pi, fraction
    return float(text), None


@dataclass(frozen=True)
class ScheduleAction:
    """One logical operation placed in a step.

    Attributes:
        kind: Operation type
        qubits: Logical qubits (control first for CNOT)
        rotation: Single-qubit rotation for INJECT
        pauli: ``"X_L"`` or ``"Z_L"`` for LOGICAL_PAULI
        basis: ``"X"`` or ``"Z"`` for MEASURE
        trn: Transitional tile id for CNOT and CZ
    """

    kind: ActionKind
    qubits: tuple[int, ...]
    rotation: RotationTerm | None = None
    pauli: str | None = None
    basis: str | None = None
    trn: str | None = None

    def __post_init__(self) -> None:
        """Validate per-kind fields."""
        expected = 2 if self.kind.uses_trn else 1
        if len(self.qubits) != expected:
            raise ValueError(f"{self.kind.value} takes {expected} qubit(s), got {self.qubits}")
        if self.kind is ActionKind.INJECT:
            if self.rotation is None or self.rotation.pauli.n != 1:
                raise ValueError("inject needs a single-qubit rotation")
        if self.kind is ActionKind.LOGICAL_PAULI and self.pauli not in ("X_L", "Z_L"):
            raise ValueError(f"logical_pauli must be X_L or Z_L, got {self.pauli!r}")
        if self.kind is ActionKind.MEASURE and self.basis not in ("X", "Z"):
            raise ValueError(f"measure basis must be X or Z, got {self.basis!r}")
        if self.kind.uses_trn and not self.trn:
            raise ValueError(f"{self.kind.value} needs a TRN tile")

    def tiles(self) -> set[str]:
        """Tile ids this action keeps busy."""
        busy = {qubit_tile(q) for q in self.qubits}
        if self.trn:
            busy.add(self.trn)
        return busy

    def describe(self) -> str:
        """Short label such as ``inject Z_{pi/8}@q0`` or ``cnot(q2->q0)``."""
        if self.kind is ActionKind.INJECT and self.rotation is not None:
            return f"inject {self.rotation.axis}_{{{self.rotation.angle_text()}}}@q{self.qubits[0]}"
        if self.kind is ActionKind.CNOT:
            return f"cnot(q{self.qubits[0]}->q{self.qubits[1]})"
        if self.kind is ActionKind.CZ:
            return f"cz(q{self.qubits[0]},q{self.qubits[1]})"
        if self.kind is ActionKind.LOGICAL_PAULI:
            return f"{self.pauli}@q{self.qubits[0]}"
        return f"measure {self.basis}@q{self.qubits[0]}"

    def to_dict(self) -> dict:
        out: dict = {"type": self.kind.value}
        if self.kind.uses_trn:
            out["qubits"] = list(self.qubits)
            out["trn"] = self.trn
        else:
            out["qubit"] = self.qubits[0]
        if self.rotation is not None:
            out["rotation"] = {"axis": self.rotation.axis, "angle": self.rotation.angle_text()}
        if self.pauli is not None:
            out["pauli"] = self.pauli
        if self.basis is not None:
            out["basis"] = self.basis
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ScheduleAction":
        """Inverse of to_dict.

        Raises:
            ValueError / KeyError: On malformed records
        """
        kind = ActionKind(data["type"])
        qubits = tuple(data["qubits"]) if kind.uses_trn else (int(data["qubit"]),)
        rotation = None
        if "rotation" in data:
            angle, fraction = parse_angle(data["rotation"]["angle"])
            pauli = PauliString.from_label(data["rotation"]["axis"])
            rotation = RotationTerm(pauli, angle, (qubits[0],), fraction)
        return cls(
            kind=kind,
            qubits=qubits,
            rotation=rotation,
            pauli=data.get("pauli"),
            basis=data.get("basis"),
            trn=data.get("trn"),
        )


@dataclass(frozen=True)
class TileInfo:
    """A tile slot of the schedule canvas."""

    kind: TileKind
    slot: tuple[int, int]
    qubit: int | None = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind.value, "slot": list(self.slot)}
        if self.qubit is not None:
            out["qubit"] = self.qubit
        return out


@dataclass
class SurgeryStep:
    """Actions sharing one time step; ``resets`` lists TRN tiles reset to |+> afterwards."""

    index: int
    actions: list[ScheduleAction] = field(default_factory=list)
    resets: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        """Validate index and spatial disjointness."""
        if self.index < 1:
            raise ValueError(f"step index must be >= 1, got {self.index}")
        seen: set[str] = set()
        for action in self.actions:
            overlap = seen & action.tiles()
            if overlap:
                raise ValueError(f"step {self.index} uses tile(s) {sorted(overlap)} twice")
            seen |= action.tiles()

    def busy_tiles(self) -> set[str]:
        busy: set[str] = set()
        for action in self.actions:
            busy |= action.tiles()
        return busy

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "actions": [a.to_dict() for a in self.actions],
            "resets": list(self.resets),
        }


@dataclass
class SurgerySchedule:
    """Compiled circuit: tile canvas, steps and the source gate lines.

    Attributes:
        grid: (rows, cols) of tile slots
        distance: Code distance of every tile
        tiles: Tile id -> slot info, qubit tiles first
        steps: Ordered steps
        n_qubits: Logical register size
        circuit: Source gate lines in circuit-text syntax, for reference runs
    """

    grid: tuple[int, int]
    distance: int
    tiles: dict[str, TileInfo]
    steps: list[SurgeryStep] = field(default_factory=list)
    n_qubits: int = 0
    circuit: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        """Validate that every action references an allocated tile."""
        for step in self.steps:
            missing = step.busy_tiles() - set(self.tiles)
            if missing:
                raise ValueError(f"step {step.index} references unknown tile(s) {sorted(missing)}")

    @property
    def metrics(self) -> dict[str, int]:
        return {"tiles_used": len(self.tiles), "timesteps": len(self.steps)}

    def trn_tiles(self) -> list[str]:
        return [tid for tid, info in self.tiles.items() if info.kind is TileKind.TRN]
