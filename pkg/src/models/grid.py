"""Tile canvas value types."""

from dataclasses import dataclass
from enum import Enum

Cell = tuple[int, int]


class CellRole(Enum):
    """What a reserved canvas cell is used for."""

    DATA = "data"
    ANCILLA = "ancilla"
    RESERVED = "reserved"
    TRANSITIONAL = "transitional"


@dataclass(frozen=True)
class Occupant:
    """Owner of one cell: a tile id or a seam id."""

    role: CellRole
    owner: str


@dataclass(frozen=True)
class Tile:
    """A (2d+1) x (2d+1) block of cells anchored at an even-even origin."""

    tile_id: str
    d: int
    origin: Cell

    def __post_init__(self) -> None:
        """Validate distance and origin parity."""
        if self.d < 1:
            raise ValueError(f"tile distance must be >= 1, got {self.d}")
        if self.origin[0] % 2 or self.origin[1] % 2:
            raise ValueError(f"tile origin must have even coordinates, got {self.origin}")

    @property
    def span(self) -> int:
        return 2 * self.d + 1

    def cells(self) -> list[Cell]:
        r0, c0 = self.origin
        return [(r0 + r, c0 + c) for r in range(self.span) for c in range(self.span)]

    @staticmethod
    def role_of(local: Cell) -> CellRole:
        r, c = local
        if r % 2 == 1 and c % 2 == 1:
            return CellRole.DATA
        if r % 2 == 0 and c % 2 == 0:
            return CellRole.ANCILLA
        return CellRole.RESERVED


@dataclass(frozen=True)
class Seam:
    """Transitional gutter cells between two adjacent tiles."""

    seam_id: str
    tile_a: str
    tile_b: str
    cells: tuple[Cell, ...]
    horizontal: bool
