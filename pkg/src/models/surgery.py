"""Outcome records of lattice-surgery primitives."""

from dataclasses import dataclass, field
from enum import Enum

from src.models.grid import Cell
from src.models.patch import PatchLayout, SyndromeRecord
from src.models.pauli_string import PauliString


class JointOperator(Enum):
    """Joint logical observable a merge measures."""

    XX = "X_L*X_L"
    ZZ = "Z_L*Z_L"

    @property
    def letter(self) -> str:
        return self.name[0]


class MergeKind(Enum):
    ROUGH = "rough"
    SMOOTH = "smooth"

    @property
    def joint(self) -> JointOperator:
        return JointOperator.XX if self is MergeKind.ROUGH else JointOperator.ZZ


@dataclass(frozen=True)
class MergeResult:
    """A merged patch and the joint logical eigenvalue the merge revealed.

    Attributes:
        merged: Combined rectangular patch
        joint_outcome: Eigenvalue of ``joint_operator`` after the merge
        joint_operator: X_L*X_L for rough merges, Z_L*Z_L for smooth ones
        transitional_qubits: Gutter data cells that joined the two patches
        kind: Merge kind
        parts: The two input patches, first one at the lower coordinate
        seam_id: Registry seam held open until the split
        records: Syndrome rounds measured on the merged patch
    """

    merged: PatchLayout
    joint_outcome: int
    joint_operator: JointOperator
    transitional_qubits: tuple[Cell, ...]
    kind: MergeKind
    parts: tuple[PatchLayout, PatchLayout]
    seam_id: str
    records: tuple[SyndromeRecord, ...] = ()

    def __post_init__(self) -> None:
        """Validate the outcome value."""
        if self.joint_outcome not in (1, -1):
            raise ValueError(f"joint_outcome must be +1 or -1, got {self.joint_outcome}")
        if not self.transitional_qubits:
            raise ValueError("a merge needs at least one transitional qubit")


@dataclass(frozen=True)
class SplitResult:
    """Two patches restored from a merged one.

    Attributes:
        left: Patch at the lower coordinate
        right: Patch at the higher coordinate
        row_outcomes: Transitional cell -> measurement outcome
        byproduct: Logical Pauli owed on ``right``; identity when none
    """

    left: PatchLayout
    right: PatchLayout
    row_outcomes: dict[Cell, int] = field(default_factory=dict)
    byproduct: PauliString | None = None

    def __post_init__(self) -> None:
        """Validate disjointness of the restored patches."""
        if set(self.left.data_qubits) & set(self.right.data_qubits):
            raise ValueError("split patches must not share data qubits")
        for cell, value in self.row_outcomes.items():
            if value not in (1, -1):
                raise ValueError(f"outcome for {cell} must be +1 or -1, got {value}")

    @property
    def has_byproduct(self) -> bool:
        return self.byproduct is not None and not self.byproduct.is_identity()
