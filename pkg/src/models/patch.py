"""Surface-code patch geometry and syndrome value types."""

from dataclasses import dataclass, field
from enum import Enum

from src.models.pauli_string import PauliString

Cell = tuple[int, int]


class PatchKind(Enum):
    """Lattice construction."""

    ROTATED = "rotated"
    UNROTATED = "unrotated"


class Orientation(Enum):
    """Boundary frame of a patch.

    STANDARD puts rough edges left/right; TURNED is the frame left behind by
    transversal H, with rough edges top/bottom and the checkerboard inverted.
    """

    STANDARD = "standard"
    TURNED = "turned"

    def flipped(self) -> "Orientation":
        return Orientation.TURNED if self is Orientation.STANDARD else Orientation.STANDARD


class Boundary(Enum):
    """Edge type: rough edges host Z-type checks, smooth edges host X-type checks."""

    ROUGH = "rough"
    SMOOTH = "smooth"

    @property
    def check_letter(self) -> str:
        return "Z" if self is Boundary.ROUGH else "X"


class Side(Enum):
    TOP = "top"
    BOTTOM = "bottom"
    LEFT = "left"
    RIGHT = "right"


def boundaries_for(orientation: Orientation) -> dict[Side, Boundary]:
    """Per-side boundary tags of an orientation."""
    lr, tb = (
        (Boundary.ROUGH, Boundary.SMOOTH)
        if orientation is Orientation.STANDARD
        else (Boundary.SMOOTH, Boundary.ROUGH)
    )
    return {Side.LEFT: lr, Side.RIGHT: lr, Side.TOP: tb, Side.BOTTOM: tb}


@dataclass(frozen=True)
class Check:
    """One stabilizer generator and the ancilla cell that measures it.

    Attributes:
        check_id: Identifier unique within its patch, e.g. ``"X2"``
        letter: ``"X"`` or ``"Z"``
        ancilla: Grid cell of the measuring ancilla
        support: Data cells acted on, in a fixed order
    """

    check_id: str
    letter: str
    ancilla: Cell
    support: tuple[Cell, ...]

    def __post_init__(self) -> None:
        """Validate type and weight."""
        if self.letter not in ("X", "Z"):
            raise ValueError(f"Check letter must be X or Z, got {self.letter!r}")
        if not self.support:
            raise ValueError(f"Check {self.check_id} has empty support")


@dataclass(frozen=True, eq=False)
class PatchLayout:
    """Geometry of one patch on the global grid.

    Data qubits are indexed (i, j) in a height x width array; for rotated
    patches data (i, j) sits at cell ``(origin_row + 2i + 1, origin_col + 2j + 1)``.
    Stabilizers and logical operators are PauliStrings over the registry's
    global qubit indices.
    """

    patch_id: str
    kind: PatchKind
    d: int
    origin: Cell
    orientation: Orientation
    height: int
    width: int
    data_qubits: tuple[Cell, ...]
    checks: tuple[Check, ...]
    qubit_index: dict[Cell, int]
    n: int
    x_stabilizers: tuple[PauliString, ...]
    z_stabilizers: tuple[PauliString, ...]
    logical_x: PauliString
    logical_z: PauliString
    boundaries: dict[Side, Boundary] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate sizes and operator widths."""
        if self.d < 1:
            raise ValueError(f"distance must be >= 1, got {self.d}")
        if len(self.checks) != len(self.x_stabilizers) + len(self.z_stabilizers):
            raise ValueError("every check needs exactly one stabilizer")
        for op in (*self.x_stabilizers, *self.z_stabilizers, self.logical_x, self.logical_z):
            if op.n != self.n:
                raise ValueError(f"operator acts on {op.n} qubits, layout expects {self.n}")

    @property
    def ancilla_qubits(self) -> dict[Cell, str]:
        """Ancilla cell -> check letter."""
        return {c.ancilla: c.letter for c in self.checks}

    @property
    def stabilizers(self) -> tuple[PauliString, ...]:
        """All generators in check order."""
        by_id = dict(zip(self.check_ids_by_letter("X"), self.x_stabilizers, strict=True))
        by_id.update(zip(self.check_ids_by_letter("Z"), self.z_stabilizers, strict=True))
        return tuple(by_id[c.check_id] for c in self.checks)

    def check_ids_by_letter(self, letter: str) -> list[str]:
        return [c.check_id for c in self.checks if c.letter == letter]

    def check(self, check_id: str) -> Check:
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def data_cell(self, i: int, j: int) -> Cell:
        return self.data_qubits[i * self.width + j]

    def data_indices(self) -> list[int]:
        return [self.qubit_index[c] for c in self.data_qubits]

    def all_cells(self) -> set[Cell]:
        return set(self.data_qubits) | {c.ancilla for c in self.checks}

    def footprint(self) -> tuple[Cell, int, int]:
        """(origin, height, width): equal footprints cover the same data cells."""
        return (self.origin, self.height, self.width)

    @property
    def x_rep_cells(self) -> list[Cell]:
        """Data cells of the stored X_L representative."""
        return [c for c in self.data_qubits if self.logical_x.x[self.qubit_index[c]]]

    @property
    def z_rep_cells(self) -> list[Cell]:
        """Data cells of the stored Z_L representative."""
        return [c for c in self.data_qubits if self.logical_z.z[self.qubit_index[c]]]


@dataclass(frozen=True)
class PhysicalOp:
    """One step of a syndrome-extraction circuit: a gate or ``MZ`` (Z measurement)."""

    name: str
    qubits: tuple[int, ...]


@dataclass
class SyndromeRecord:
    """Stabilizer outcomes of one round.

    Attributes:
        round: Round index, starting at 1
        values: check id -> +1/-1
        letters: check id -> ``"X"`` (S_x) or ``"Z"`` (S_z)
    """

    round: int
    values: dict[str, int] = field(default_factory=dict)
    letters: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate outcome values."""
        for check_id, value in self.values.items():
            if value not in (1, -1):
                raise ValueError(f"outcome for {check_id} must be +1 or -1, got {value}")

    def flipped(self) -> list[str]:
        """Check ids with outcome -1."""
        return [cid for cid, v in self.values.items() if v == -1]

    def s_z(self) -> dict[str, int]:
        return {cid: v for cid, v in self.values.items() if self.letters.get(cid) == "Z"}

    def s_x(self) -> dict[str, int]:
        return {cid: v for cid, v in self.values.items() if self.letters.get(cid) == "X"}

    def bits(self, order: list[str]) -> tuple[int, ...]:
        return tuple(0 if self.values[cid] == 1 else 1 for cid in order)
