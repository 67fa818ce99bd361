"""Bookkeeping for the shared physical-qubit canvas.

Tracks tile allocation, transitional seams and the permanent mapping from
grid cells to simulator qubit indices. Indices are handed out on first use
and never change, so traces recorded against them stay valid.
"""

from collections.abc import Iterable

from src.models.grid import Cell, CellRole, Occupant, Seam, Tile
from src.models.measurement import Basis
from src.services.simulator import Simulator
from src.utils.logging import get_logger

logger = get_logger(__name__)


class GridError(Exception):
    """Base exception for canvas bookkeeping errors."""


class TileOverlapError(GridError):
    """Raised when a block overlaps cells owned by someone else."""


class GridBoundsError(GridError):
    """Raised when a block leaves the canvas."""


class UnknownTileError(GridError):
    """Raised for tile or seam ids the registry does not know."""


class SeamError(GridError):
    """Raised when two tiles are not adjacent across one gutter."""


class ActiveSeamError(GridError):
    """Raised when releasing a tile that takes part in an open seam."""


class GridCapacityError(GridError):
    """Raised when more qubit cells are used than the simulator holds."""


class GridRegistry:
    """Fixed canvas of ``rows x cols`` cells."""

    def __init__(self, rows: int, cols: int, capacity: int | None = None) -> None:
        """Create an empty canvas.

        Args:
            rows: Canvas height in cells
            cols: Canvas width in cells
            capacity: Maximum number of qubit indices (default: rows * cols)
        """
        if rows < 1 or cols < 1:
            raise GridBoundsError(f"canvas must be at least 1x1, got {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.capacity = rows * cols if capacity is None else capacity
        self.occupancy: dict[Cell, Occupant] = {}
        self.index_map: dict[Cell, int] = {}
        self._tiles: dict[str, Tile] = {}
        self._seams: dict[str, Seam] = {}
        self._counter = 0

    # --- indices ---

    def index_of(self, cell: Cell) -> int:
        """Simulator index of a cell, assigned on first use.

        Raises:
            GridBoundsError: If the cell is off the canvas
            GridCapacityError: If no index is left
        """
        if cell in self.index_map:
            return self.index_map[cell]
        self._check_bounds([cell])
        if len(self.index_map) >= self.capacity:
            raise GridCapacityError(
                f"cell {cell} needs a qubit but all {self.capacity} indices are in use"
            )
        self.index_map[cell] = len(self.index_map)
        return self.index_map[cell]

    def indices(self, cells: Iterable[Cell]) -> list[int]:
        return [self.index_of(c) for c in cells]

    def cell_of(self, index: int) -> Cell:
        for cell, idx in self.index_map.items():
            if idx == index:
                return cell
        raise UnknownTileError(f"no cell holds qubit index {index}")

    # --- tiles ---

    @property
    def tiles(self) -> dict[str, Tile]:
        return dict(self._tiles)

    @property
    def seams(self) -> dict[str, Seam]:
        return dict(self._seams)

    def tile(self, tile_id: str) -> Tile:
        try:
            return self._tiles[tile_id]
        except KeyError as e:
            raise UnknownTileError(f"unknown tile {tile_id!r}") from e

    def _check_bounds(self, cells: Iterable[Cell]) -> None:
        for r, c in cells:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise GridBoundsError(
                    f"cell {(r, c)} is outside the {self.rows}x{self.cols} canvas"
                )

    def _check_free(self, cells: Iterable[Cell], owner: str | None = None) -> None:
        for cell in cells:
            occupant = self.occupancy.get(cell)
            if occupant is not None and occupant.owner != owner:
                raise TileOverlapError(f"cell {cell} is already owned by {occupant.owner}")

    def allocate_tile(self, d: int, origin: Cell, tile_id: str | None = None) -> str:
        """Reserve a (2d+1) x (2d+1) block.

        Returns:
            The tile id

        Raises:
            GridBoundsError: If the block leaves the canvas
            TileOverlapError: If any cell is owned
        """
        if tile_id is None:
            self._counter += 1
            tile_id = f"tile{self._counter}"
        if tile_id in self._tiles:
            raise TileOverlapError(f"tile id {tile_id!r} is already allocated")
        tile = Tile(tile_id, d, origin)
        cells = tile.cells()
        self._check_bounds(cells)
        self._check_free(cells)
        for cell in cells:
            local = (cell[0] - origin[0], cell[1] - origin[1])
            self.occupancy[cell] = Occupant(Tile.role_of(local), tile_id)
        self._tiles[tile_id] = tile
        logger.debug("Allocated %s: d=%d origin=%s (%d cells)", tile_id, d, origin, len(cells))
        return tile_id

    def resize_tile(self, tile_id: str, d_new: int) -> Tile:
        """Grow or shrink a tile about its fixed origin.

        Raises:
            GridBoundsError / TileOverlapError: If the grown block does not fit
        """
        old = self.tile(tile_id)
        self._ensure_no_open_seam(tile_id)
        new = Tile(tile_id, d_new, old.origin)
        cells = new.cells()
        self._check_bounds(cells)
        self._check_free(cells, owner=tile_id)
        for cell in old.cells():
            del self.occupancy[cell]
        for cell in cells:
            local = (cell[0] - new.origin[0], cell[1] - new.origin[1])
            self.occupancy[cell] = Occupant(Tile.role_of(local), tile_id)
        self._tiles[tile_id] = new
        return new

    def _ensure_no_open_seam(self, tile_id: str) -> None:
        for seam in self._seams.values():
            if tile_id in (seam.tile_a, seam.tile_b):
                raise ActiveSeamError(f"tile {tile_id!r} is joined by active seam {seam.seam_id}")

    def release_tile(self, tile_id: str, sim: Simulator | None = None) -> None:
        """Free a tile's cells, resetting its qubits to |0> first when a simulator is given.

        Raises:
            UnknownTileError: If the tile is not allocated
            ActiveSeamError: If the tile takes part in an open seam
        """
        tile = self.tile(tile_id)
        self._ensure_no_open_seam(tile_id)
        cells = tile.cells()
        if sim is not None:
            used = [self.index_map[c] for c in cells if c in self.index_map]
            if used:
                sim.reset_qubits(used, Basis.ZERO)
        for cell in cells:
            del self.occupancy[cell]
        del self._tiles[tile_id]
        logger.debug("Released %s", tile_id)

    def rename_tile(self, tile_id: str, new_id: str) -> None:
        """Hand a tile's cells to a new id.

        Raises:
            TileOverlapError: If new_id is taken
        """
        tile = self.tile(tile_id)
        if new_id in self._tiles:
            raise TileOverlapError(f"tile id {new_id!r} is already allocated")
        self._ensure_no_open_seam(tile_id)
        for cell in tile.cells():
            self.occupancy[cell] = Occupant(self.occupancy[cell].role, new_id)
        del self._tiles[tile_id]
        self._tiles[new_id] = Tile(new_id, tile.d, tile.origin)

    # --- seams ---

    def seam_between(self, tile_a: str, tile_b: str) -> list[Cell]:
        """Gutter data cells between two adjacent tiles, ordered top-down or left-right.

        Raises:
            SeamError: If the tiles are not neighbours across one gutter
        """
        a = self.tile(tile_a)
        b = self.tile(tile_b)
        if a.d != b.d:
            raise SeamError(f"tiles {tile_a} and {tile_b} have different distances")
        step = 2 * a.d + 2
        (ra, ca), (rb, cb) = a.origin, b.origin
        if ra == rb and abs(cb - ca) == step:
            r0, left = ra, min(ca, cb)
            return [(r0 + 2 * i + 1, left + 2 * a.d + 1) for i in range(a.d)]
        if ca == cb and abs(rb - ra) == step:
            c0, top = ca, min(ra, rb)
            return [(top + 2 * a.d + 1, c0 + 2 * j + 1) for j in range(a.d)]
        raise SeamError(f"tiles {tile_a} {a.origin} and {tile_b} {b.origin} are not adjacent")

    def open_seam(self, tile_a: str, tile_b: str) -> Seam:
        """Claim the gutter cells between two tiles for a merge.

        Raises:
            TileOverlapError: If a gutter cell is owned
        """
        cells = self.seam_between(tile_a, tile_b)
        self._check_free(cells)
        horizontal = self.tile(tile_a).origin[0] == self.tile(tile_b).origin[0]
        self._counter += 1
        seam = Seam(f"seam{self._counter}", tile_a, tile_b, tuple(cells), horizontal)
        for cell in cells:
            self.occupancy[cell] = Occupant(CellRole.TRANSITIONAL, seam.seam_id)
        self._seams[seam.seam_id] = seam
        return seam

    def close_seam(self, seam_id: str) -> None:
        try:
            seam = self._seams.pop(seam_id)
        except KeyError as e:
            raise UnknownTileError(f"unknown seam {seam_id!r}") from e
        for cell in seam.cells:
            del self.occupancy[cell]

    def seam_for(self, tile_a: str, tile_b: str) -> Seam | None:
        for seam in self._seams.values():
            if {seam.tile_a, seam.tile_b} == {tile_a, tile_b}:
                return seam
        return None

    def free_cells(self) -> set[Cell]:
        every = {(r, c) for r in range(self.rows) for c in range(self.cols)}
        return every - set(self.occupancy)

    def snapshot(self) -> dict:
        """JSON-ready summary of the canvas."""
        return {
            "rows": self.rows,
            "cols": self.cols,
            "tiles": {
                tid: {"d": t.d, "origin": list(t.origin)} for tid, t in sorted(self._tiles.items())
            },
            "qubits": len(self.index_map),
        }
