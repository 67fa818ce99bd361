"""Lattice-surgery primitives on a shared simulator and tile canvas.

Merges, splits, injection, expansion, contraction and the transversal
Hadamard are written against the backend-neutral ``Simulator`` interface.
Byproducts are returned as logical PauliStrings and never applied here.
"""

from collections.abc import Sequence
from itertools import pairwise

import numpy as np

from src.models.grid import Cell
from src.models.measurement import Basis
from src.models.patch import Boundary, Orientation, PatchKind, PatchLayout, Side, SyndromeRecord
from src.models.pauli_string import PauliString
from src.models.surgery import MergeKind, MergeResult, SplitResult
from src.services import patch_builder
from src.services.grid_registry import (
    GridBoundsError,
    GridRegistry,
    SeamError,
    TileOverlapError,
)
from src.services.patch_builder import SyndromeMode, infer_sign, layout_patch
from src.services.simulator import Simulator
from src.utils.logging import get_logger

logger = get_logger(__name__)

# Single-qubit stabilizer seeds as gate sequences applied to |0>.
SEED_PREPARATIONS: dict[str, tuple[str, ...]] = {
    "0": (),
    "1": ("X",),
    "+": ("H",),
    "-": ("H", "Z"),
    "i": ("H", "S"),
    "-i": ("H", "S", "Z"),
}


class SurgeryError(Exception):
    """Base exception for lattice-surgery primitives."""


class BoundaryMismatchError(SurgeryError):
    """Raised when the facing boundaries do not fit the requested operation."""


class DistanceMismatchError(SurgeryError):
    """Raised when two patches have different distances or shapes."""


class SeamNotFoundError(SurgeryError):
    """Raised when a split finds no open seam for the merged patch."""


class InjectionPreconditionError(SurgeryError):
    """Raised when a patch is not in the reset state injection needs."""


class GridSpaceError(SurgeryError):
    """Raised when a resize or move does not fit on the canvas."""


def seed_unitary(seed: str | Sequence[complex]) -> np.ndarray:
    """2x2 unitary mapping |0> to the seed state."""
    if isinstance(seed, str):
        raise SurgeryError(f"named seed {seed!r} is prepared with gates, not a matrix")
    vec = np.asarray(seed, dtype=np.complex128).reshape(2)
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise SurgeryError("seed state must be non-zero")
    a, b = vec / norm
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]], dtype=np.complex128)


class SurgeryService:
    """Runs surgery primitives against one simulator and one tile registry.

    All primitives need exclusive use of both objects.
    """

    def __init__(
        self,
        sim: Simulator,
        registry: GridRegistry,
        rounds: int = 1,
        mode: SyndromeMode = SyndromeMode.DIRECT,
    ) -> None:
        """Bind the service to a simulator and canvas.

        Args:
            sim: Backend holding ``registry.capacity`` qubits
            registry: Tile canvas the patches live on
            rounds: Stabilization rounds after every deformation
            mode: Syndrome extraction mode
        """
        if sim.n != registry.capacity:
            raise SurgeryError(
                f"simulator has {sim.n} qubits but the canvas hands out {registry.capacity}"
            )
        self.sim = sim
        self.registry = registry
        self.rounds = rounds
        self.mode = mode

    # --- helpers ---

    def settle(self, p: PatchLayout) -> list[SyndromeRecord]:
        return patch_builder.settle(self.sim, p, self.rounds, self.mode)

    def _measure_cells(self, cells: Sequence[Cell], letter: str) -> dict[Cell, int]:
        n = self.registry.capacity
        return {
            cell: self.sim.measure_pauli(
                PauliString.from_sparse(n, {self.registry.index_of(cell): letter})
            ).value
            for cell in cells
        }

    def _reset_cells(self, cells: Sequence[Cell], basis: Basis = Basis.ZERO) -> None:
        if cells:
            self.sim.reset_qubits(self.registry.indices(cells), basis)

    def _identity(self) -> PauliString:
        return PauliString.identity(self.registry.capacity)

    @staticmethod
    def _require_rotated(*patches: PatchLayout) -> None:
        for p in patches:
            if p.kind is not PatchKind.ROTATED:
                raise BoundaryMismatchError(f"surgery needs rotated patches, {p.patch_id} is not")

    # --- merge / split ---

    def _order_pair(
        self, a: PatchLayout, b: PatchLayout, kind: MergeKind
    ) -> tuple[PatchLayout, PatchLayout, bool]:
        self._require_rotated(a, b)
        if a.d != b.d:
            raise DistanceMismatchError(f"cannot merge d={a.d} with d={b.d}")
        if a.orientation is not b.orientation:
            raise BoundaryMismatchError(
                f"{a.patch_id} and {b.patch_id} have different orientations"
            )
        try:
            self.registry.seam_between(a.patch_id, b.patch_id)
        except SeamError as e:
            raise BoundaryMismatchError(str(e)) from e
        horizontal = a.origin[0] == b.origin[0]
        facing = Side.RIGHT if horizontal else Side.BOTTOM
        wanted = Boundary.ROUGH if kind is MergeKind.ROUGH else Boundary.SMOOTH
        if a.boundaries[facing] is not wanted:
            raise BoundaryMismatchError(
                f"facing boundaries of {a.patch_id} and {b.patch_id} are "
                f"{a.boundaries[facing].value}, a {kind.value} merge needs {wanted.value}"
            )
        first, second = (a, b) if a.origin <= b.origin else (b, a)
        return first, second, horizontal

    def _merge(self, a: PatchLayout, b: PatchLayout, kind: MergeKind) -> MergeResult:
        first, second, horizontal = self._order_pair(a, b, kind)
        try:
            seam = self.registry.open_seam(first.patch_id, second.patch_id)
        except TileOverlapError as e:
            raise GridSpaceError(f"gutter is occupied: {e}") from e

        basis = Basis.ZERO if kind is MergeKind.ROUGH else Basis.PLUS
        self._reset_cells(seam.cells, basis)
        d = first.d
        merged = layout_patch(
            self.registry,
            f"{first.patch_id}+{second.patch_id}",
            PatchKind.ROTATED,
            d,
            first.origin,
            first.orientation,
            height=d if horizontal else 2 * d + 1,
            width=2 * d + 1 if horizontal else d,
        )
        records = patch_builder.stabilize(self.sim, merged, self.rounds, self.mode)

        letter = kind.joint.letter
        joint = patch_builder.logical_operator(first, letter) * patch_builder.logical_operator(
            second, letter
        )
        outcomes = [records[-1].values[c.check_id] for c in merged.checks]
        joint_outcome = infer_sign(joint, merged.stabilizers, outcomes)
        if joint_outcome is None:
            raise SurgeryError(f"{joint.to_label()} is not generated by the merged checks")
        logger.debug(
            "%s merge %s: %s = %+d",
            kind.value,
            merged.patch_id,
            kind.joint.value,
            joint_outcome,
        )
        return MergeResult(
            merged=merged,
            joint_outcome=joint_outcome,
            joint_operator=kind.joint,
            transitional_qubits=seam.cells,
            kind=kind,
            parts=(first, second),
            seam_id=seam.seam_id,
            records=tuple(records),
        )

    def rough_merge(self, a: PatchLayout, b: PatchLayout) -> MergeResult:
        """Merge across rough boundaries, measuring X_L(a) X_L(b).

        Raises:
            BoundaryMismatchError: If the facing boundaries are not rough
            DistanceMismatchError: If the distances differ
            GridSpaceError: If the gutter is occupied
        """
        return self._merge(a, b, MergeKind.ROUGH)

    def smooth_merge(self, a: PatchLayout, b: PatchLayout) -> MergeResult:
        """Merge across smooth boundaries, measuring Z_L(a) Z_L(b)."""
        return self._merge(a, b, MergeKind.SMOOTH)

    def _split(self, m: MergeResult, kind: MergeKind) -> SplitResult:
        if m.kind is not kind:
            raise SeamNotFoundError(f"{m.merged.patch_id} was joined by a {m.kind.value} merge")
        if m.seam_id not in self.registry.seams:
            raise SeamNotFoundError(f"seam {m.seam_id} of {m.merged.patch_id} is not open")
        first, second = m.parts
        # Rough seams are read out in Z, smooth seams in X.
        letter = "Z" if kind is MergeKind.ROUGH else "X"
        row_outcomes = self._measure_cells(m.transitional_qubits, letter)

        for part in m.parts:
            self.settle(part)

        merged_rep = m.merged.logical_z if kind is MergeKind.ROUGH else m.merged.logical_x
        rep_cells = [
            c for c in m.transitional_qubits if merged_rep.letter(self.registry.index_of(c)) != "I"
        ]
        sign = int(np.prod([row_outcomes[c] for c in rep_cells])) if rep_cells else 1
        if sign == -1:
            owed = second.logical_x if kind is MergeKind.ROUGH else second.logical_z
        else:
            owed = self._identity()

        self.registry.close_seam(m.seam_id)
        self._reset_cells(list(m.transitional_qubits))
        logger.debug(
            "%s split %s: seam %s, byproduct %s",
            kind.value,
            m.merged.patch_id,
            letter,
            "none" if owed.is_identity() else f"{owed.letter(owed.support()[0])}_L",
        )
        return SplitResult(first, second, row_outcomes, owed)

    def rough_split(self, m: MergeResult) -> SplitResult:
        """Undo a rough merge; a -1 seam readout owes X_L on the second patch.

        Raises:
            SeamNotFoundError: If the merge's seam is no longer open
        """
        return self._split(m, MergeKind.ROUGH)

    def smooth_split(self, m: MergeResult) -> SplitResult:
        """Undo a smooth merge; a -1 seam readout owes Z_L on the second patch."""
        return self._split(m, MergeKind.SMOOTH)

    # --- injection ---

    def _rep_line(self, p: PatchLayout) -> list[Cell]:
        """Data cells of the X_L line, starting from the corner seed."""
        if p.orientation is Orientation.STANDARD:
            return [p.data_cell(i, 0) for i in range(p.height)]
        return [p.data_cell(0, j) for j in range(p.width)]

    def _spread_seed(self, p: PatchLayout) -> None:
        """Copy the corner qubit along the X_L line through neighbouring ancillas."""
        line = self._rep_line(p)
        r0, c0 = p.origin
        for k in range(1, len(line)):
            if p.orientation is Orientation.STANDARD:
                anc = (r0 + 2 * k, c0 + 2)
            else:
                anc = (r0 + 2, c0 + 2 * k)
            a = self.registry.index_of(anc)
            self.sim.reset_qubits([a])
            self.sim.apply_gate("CNOT", (self.registry.index_of(line[k - 1]), a))
            self.sim.apply_gate("SWAP", (a, self.registry.index_of(line[k])))

    def _prepare_seed(self, index: int, seed: str | Sequence[complex]) -> None:
        if isinstance(seed, str):
            if seed not in SEED_PREPARATIONS:
                raise InjectionPreconditionError(
                    f"unknown seed {seed!r}, expected one of {sorted(SEED_PREPARATIONS)}"
                )
            for gate in SEED_PREPARATIONS[seed]:
                self.sim.apply_gate(gate, (index,))
            return
        apply_unitary = getattr(self.sim, "apply_unitary", None)
        if apply_unitary is None:
            raise InjectionPreconditionError(
                "arbitrary seed amplitudes need a backend with apply_unitary"
            )
        apply_unitary(seed_unitary(seed), (index,))

    def check_reset(self, p: PatchLayout, skip: Sequence[Cell] = ()) -> None:
        """Require every data qubit outside ``skip`` to be in |0>.

        Raises:
            InjectionPreconditionError: If one is not
        """
        n = self.registry.capacity
        for cell in p.data_qubits:
            if cell in skip:
                continue
            z = PauliString.from_sparse(n, {self.registry.index_of(cell): "Z"})
            if self.sim.contains_stabilizer(z) != 1:
                raise InjectionPreconditionError(f"data qubit {cell} of {p.patch_id} is not |0>")

    def inject_state(
        self, p: PatchLayout, seed: str | Sequence[complex], prepared: bool = False
    ) -> list[SyndromeRecord]:
        """Encode a single-qubit seed state as alpha|0>_L + beta|1>_L.

        Args:
            p: Rotated patch whose data qubits are all |0>
            seed: A label from SEED_PREPARATIONS or a 2-vector of amplitudes
            prepared: The corner qubit already carries the seed

        Returns:
            Syndrome records of the stabilization that followed

        Raises:
            InjectionPreconditionError: If the patch is not reset
        """
        self._require_rotated(p)
        corner = p.data_cell(0, 0)
        self.check_reset(p, skip=(corner,) if prepared else ())
        if not prepared:
            self._prepare_seed(self.registry.index_of(corner), seed)
        self._spread_seed(p)
        records = self.settle(p)
        label = seed if isinstance(seed, str) else "amplitudes"
        logger.debug("Injected %s into %s", label, p.patch_id)
        return records

    # --- expansion / contraction ---

    def _resize(self, p: PatchLayout, d_new: int) -> None:
        try:
            self.registry.resize_tile(p.patch_id, d_new)
        except (GridBoundsError, TileOverlapError) as e:
            raise GridSpaceError(f"cannot resize {p.patch_id} to d={d_new}: {e}") from e

    def expand_patch(self, p: PatchLayout, d_new: int) -> PatchLayout:
        """Grow a patch about its origin, carrying the logical state.

        Raises:
            PatchGeometryError: If d_new <= p.d
            GridSpaceError: If the larger tile does not fit
        """
        self._require_rotated(p)
        if d_new <= p.d:
            raise patch_builder.PatchGeometryError(f"expansion needs d_new > {p.d}, got {d_new}")
        self._resize(p, d_new)
        grown = layout_patch(
            self.registry, p.patch_id, PatchKind.ROTATED, d_new, p.origin, p.orientation
        )
        added = [c for c in grown.data_qubits if c not in set(p.data_qubits)]
        on_line = set(grown.x_rep_cells)
        self._reset_cells([c for c in added if c in on_line], Basis.PLUS)
        self._reset_cells([c for c in added if c not in on_line], Basis.ZERO)
        self.settle(grown)
        logger.debug("Expanded %s: d=%d -> %d", p.patch_id, p.d, d_new)
        return grown

    def contract_patch(self, p: PatchLayout, d_new: int) -> tuple[PatchLayout, PauliString]:
        """Shrink a patch to its top-left d_new block.

        Shed qubits on the X_L line are read in X, the rest in Z.

        Returns:
            (smaller layout, logical byproduct owed on it)

        Raises:
            PatchGeometryError: If d_new < 2 or d_new >= p.d
        """
        self._require_rotated(p)
        if d_new < 2 or d_new >= p.d:  # noqa: PLR2004
            raise patch_builder.PatchGeometryError(
                f"contraction needs 2 <= d_new < {p.d}, got {d_new}"
            )
        shrunk = layout_patch(
            self.registry, p.patch_id, PatchKind.ROTATED, d_new, p.origin, p.orientation
        )
        kept = set(shrunk.data_qubits)
        shed = [c for c in p.data_qubits if c not in kept]
        x_line = set(p.x_rep_cells)
        z_line = set(p.z_rep_cells)
        x_out = self._measure_cells([c for c in shed if c in x_line], "X")
        z_out = self._measure_cells([c for c in shed if c not in x_line], "Z")

        owed = self._identity()
        if int(np.prod(list(x_out.values()))) == -1:
            owed = owed * shrunk.logical_z
        if int(np.prod([v for c, v in z_out.items() if c in z_line])) == -1:
            owed = owed * shrunk.logical_x
        self._reset_cells(shed)
        self._resize(p, d_new)
        self.settle(shrunk)
        logger.debug("Contracted %s: d=%d -> %d", p.patch_id, p.d, d_new)
        return shrunk, owed.unsigned()

    # --- Hadamard ---

    def transversal_h(self, p: PatchLayout) -> PatchLayout:
        """H on every data qubit; the returned layout is in the turned frame."""
        for idx in p.data_indices():
            self.sim.apply_gate("H", (idx,))
        return layout_patch(
            self.registry,
            p.patch_id,
            p.kind,
            p.d,
            p.origin,
            p.orientation.flipped(),
        )

    @staticmethod
    def realign_distance(d: int) -> int:
        """Odd distance the patch passes through while it is turned back."""
        return d + 1 if d % 2 == 0 else d + 2

    def _quarter_turn(self, p: PatchLayout) -> PatchLayout:
        """Carry an odd-distance turned patch into the standard frame with data SWAPs.

        At odd distance the turned code is the standard code rotated a quarter
        turn about the patch centre: the qubit at (j, d-1-i) moves to (i, j).
        That sends the X_L row onto the X_L column and the Z_L column onto a
        Z_L row, so the logical state is untouched.
        """
        size = p.d
        source = {(i, j): (j, size - 1 - i) for i in range(size) for j in range(size)}
        visited: set[tuple[int, int]] = set()
        for start in source:
            if start in visited:
                continue
            cycle = [start]
            while source[cycle[-1]] != start:
                cycle.append(source[cycle[-1]])
            visited.update(cycle)
            for here, there in pairwise(cycle):
                self.sim.apply_gate(
                    "SWAP",
                    (
                        self.registry.index_of(p.data_cell(*here)),
                        self.registry.index_of(p.data_cell(*there)),
                    ),
                )
        standard = layout_patch(
            self.registry, p.patch_id, p.kind, p.d, p.origin, Orientation.STANDARD
        )
        self.settle(standard)
        return standard

    def hadamard_realign(self, p: PatchLayout) -> tuple[PatchLayout, PauliString]:
        """Bring a turned patch back to the standard frame on the same footprint.

        The patch is enlarged onto auxiliary qubits to the next odd distance,
        turned a quarter turn into the standard frame, and contracted back to
        its original d x d block.

        Returns:
            (standard layout, logical byproduct owed on it)

        Raises:
            BoundaryMismatchError: If p is not in the turned frame
            GridSpaceError: If the auxiliary region right of and below the tile is not free
        """
        self._require_rotated(p)
        if p.orientation is not Orientation.TURNED:
            raise BoundaryMismatchError(f"{p.patch_id} is already in the standard frame")
        size = self.realign_distance(p.d)
        try:
            grown = self.expand_patch(p, size)
        except GridSpaceError as e:
            raise GridSpaceError(
                f"insufficient grid space for the auxiliary region of {p.patch_id}: {e}"
            ) from e
        standard = self._quarter_turn(grown)
        shrunk, owed = self.contract_patch(standard, p.d)
        logger.debug("Realigned %s through d=%d", p.patch_id, size)
        return shrunk, owed

    # --- transversal and transport ---

    def transversal_cnot(self, control: PatchLayout, target: PatchLayout) -> None:
        """CNOT on every pair of corresponding data qubits of two equal patches."""
        if control.footprint()[1:] != target.footprint()[1:] or control.kind is not target.kind:
            raise DistanceMismatchError(
                f"{control.patch_id} and {target.patch_id} have different shapes"
            )
        if control.orientation is not target.orientation:
            raise BoundaryMismatchError("transversal CNOT needs equal orientations")
        for a, b in zip(control.data_indices(), target.data_indices(), strict=True):
            self.sim.apply_gate("CNOT", (a, b))

    def move_patch(self, p: PatchLayout, origin: Cell) -> PatchLayout:
        """Transfer a patch to another tile with data-qubit SWAPs.

        The offset must keep the checkerboard parity, i.e. half the row
        offset plus half the column offset is even.

        Raises:
            BoundaryMismatchError: If the move would invert the checkerboard
            GridSpaceError: If the destination is not free
        """
        if origin == p.origin:
            return p
        dr, dc = origin[0] - p.origin[0], origin[1] - p.origin[1]
        if dr % 2 or dc % 2 or (dr // 2 + dc // 2) % 2:
            raise BoundaryMismatchError(
                f"moving {p.patch_id} from {p.origin} to {origin} inverts the checkerboard"
            )
        staging = f"{p.patch_id}~"
        try:
            self.registry.allocate_tile(p.d, origin, staging)
        except (GridBoundsError, TileOverlapError) as e:
            raise GridSpaceError(f"cannot move {p.patch_id} to {origin}: {e}") from e
        moved = layout_patch(self.registry, staging, p.kind, p.d, origin, p.orientation)
        self._reset_cells(list(moved.data_qubits))
        for a, b in zip(p.data_indices(), moved.data_indices(), strict=True):
            self.sim.apply_gate("SWAP", (a, b))
        self.registry.release_tile(p.patch_id, self.sim)
        self.registry.rename_tile(staging, p.patch_id)
        logger.debug("Moved %s: %s -> %s", p.patch_id, p.origin, origin)
        return layout_patch(self.registry, p.patch_id, p.kind, p.d, origin, p.orientation)
