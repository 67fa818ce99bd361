"""Patch geometry, syndrome extraction and Pauli-frame alignment.

Rotated patches are rectangles of data qubits on odd-odd cells with
plaquettes on even-even cells. A plaquette's type follows the global cell
parity ``(row/2 + col/2) % 2``, so two patches laid out with the same
orientation agree on every shared plaquette and merges need no relabeling.
"""

from collections.abc import Iterable, Sequence
from enum import Enum
from itertools import product

import numpy as np

from src.models.patch import (
    Boundary,
    Cell,
    Check,
    Orientation,
    PatchKind,
    PatchLayout,
    PhysicalOp,
    Side,
    SyndromeRecord,
    boundaries_for,
)
from src.models.pauli_string import PauliString
from src.services.grid_registry import GridRegistry
from src.services.simulator import Simulator
from src.utils.gf2 import gf2_rank, gf2_solve
from src.utils.logging import get_logger

logger = get_logger(__name__)

_CANDIDATE_LETTERS = ("X", "Z", "Y")


class PatchError(Exception):
    """Base exception for patch construction and syndrome errors."""


class PatchGeometryError(PatchError):
    """Raised for invalid sizes or origins."""


class UnknownStabilizerError(PatchError):
    """Raised for check ids the patch does not have."""


class FrameAlignmentError(PatchError):
    """Raised when no pure error exists for a syndrome (broken layout)."""


class SyndromeMode(Enum):
    """How stabilizers are measured."""

    DIRECT = "direct"
    CIRCUIT = "circuit"


# --- geometry ---


def _plaquette_letter(cell: Cell, orientation: Orientation) -> str:
    parity = (cell[0] // 2 + cell[1] // 2) % 2
    x_here = (parity == 0) == (orientation is Orientation.STANDARD)
    return "X" if x_here else "Z"


def rotated_geometry(
    origin: Cell, height: int, width: int, orientation: Orientation
) -> tuple[list[Cell], list[tuple[str, Cell, tuple[Cell, ...]]]]:
    """Data cells and (letter, ancilla, support) plaquettes of a rotated rectangle."""
    r0, c0 = origin
    tags = boundaries_for(orientation)

    def data(i: int, j: int) -> Cell:
        return (r0 + 2 * i + 1, c0 + 2 * j + 1)

    cells = [data(i, j) for i in range(height) for j in range(width)]
    plaquettes = []
    for a in range(height + 1):
        for b in range(width + 1):
            on_tb = a in (0, height)
            on_lr = b in (0, width)
            if on_tb and on_lr:
                continue
            anc = (r0 + 2 * a, c0 + 2 * b)
            letter = _plaquette_letter(anc, orientation)
            if on_tb or on_lr:
                if on_tb:
                    side = Side.TOP if a == 0 else Side.BOTTOM
                else:
                    side = Side.LEFT if b == 0 else Side.RIGHT
                if tags[side].check_letter != letter:
                    continue
            support = tuple(
                data(i, j)
                for i, j in ((a - 1, b - 1), (a - 1, b), (a, b - 1), (a, b))
                if 0 <= i < height and 0 <= j < width
            )
            plaquettes.append((letter, anc, support))
    return cells, plaquettes


def unrotated_geometry(
    origin: Cell, d: int, orientation: Orientation
) -> tuple[list[Cell], list[tuple[str, Cell, tuple[Cell, ...]]]]:
    """Data cells and checks of an unrotated planar patch of distance d."""
    r0, c0 = origin
    size = 2 * d - 1
    swap = orientation is Orientation.TURNED
    cells = []
    plaquettes = []
    for r in range(size):
        for c in range(size):
            cell = (r0 + 1 + r, c0 + 1 + c)
            if (r + c) % 2 == 0:
                cells.append(cell)
                continue
            letter = "X" if (r % 2 == 0) != swap else "Z"
            support = tuple(
                (r0 + 1 + rr, c0 + 1 + cc)
                for rr, cc in ((r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c))
                if 0 <= rr < size and 0 <= cc < size
            )
            plaquettes.append((letter, cell, support))
    return cells, plaquettes


def _rep_cells(
    cells: Sequence[Cell], orientation: Orientation
) -> tuple[list[Cell], list[Cell]]:
    """(X_L cells, Z_L cells): first column and first row, by orientation."""
    top = min(r for r, _ in cells)
    left = min(c for _, c in cells)
    first_col = [cell for cell in cells if cell[1] == left]
    first_row = [cell for cell in cells if cell[0] == top]
    if orientation is Orientation.STANDARD:
        return first_col, first_row
    return first_row, first_col


def layout_patch(
    registry: GridRegistry,
    patch_id: str,
    kind: PatchKind,
    d: int,
    origin: Cell,
    orientation: Orientation = Orientation.STANDARD,
    height: int | None = None,
    width: int | None = None,
) -> PatchLayout:
    """Assemble a PatchLayout without reserving cells.

    Used directly for merged rectangles whose cells are already owned by
    tiles and seams; ``build_patch`` wraps it with a tile allocation.
    """
    height = d if height is None else height
    width = d if width is None else width
    if kind is PatchKind.ROTATED:
        cells, plaquettes = rotated_geometry(origin, height, width, orientation)
    else:
        cells, plaquettes = unrotated_geometry(origin, d, orientation)
        height = width = 2 * d - 1

    n = registry.capacity
    qubit_index = {cell: registry.index_of(cell) for cell in cells}
    qubit_index.update({anc: registry.index_of(anc) for _, anc, _ in plaquettes})

    counts = {"X": 0, "Z": 0}
    checks = []
    stabs: dict[str, list[PauliString]] = {"X": [], "Z": []}
    for letter, anc, support in plaquettes:
        check_id = f"{letter}{counts[letter]}"
        counts[letter] += 1
        checks.append(Check(check_id, letter, anc, support))
        stabs[letter].append(PauliString.on(n, letter, (qubit_index[c] for c in support)))

    x_cells, z_cells = _rep_cells(cells, orientation)
    return PatchLayout(
        patch_id=patch_id,
        kind=kind,
        d=d,
        origin=origin,
        orientation=orientation,
        height=height,
        width=width,
        data_qubits=tuple(cells),
        checks=tuple(checks),
        qubit_index=qubit_index,
        n=n,
        x_stabilizers=tuple(stabs["X"]),
        z_stabilizers=tuple(stabs["Z"]),
        logical_x=PauliString.on(n, "X", (qubit_index[c] for c in x_cells)),
        logical_z=PauliString.on(n, "Z", (qubit_index[c] for c in z_cells)),
        boundaries=boundaries_for(orientation),
    )


def build_patch(
    registry: GridRegistry,
    kind: PatchKind,
    d: int,
    origin: Cell,
    orientation: Orientation = Orientation.STANDARD,
    patch_id: str | None = None,
) -> PatchLayout:
    """Reserve a tile and lay out a d x d patch on it.

    Raises:
        PatchGeometryError: If d < 2
        TileOverlapError: If the region is already owned
    """
    if d < 2:  # noqa: PLR2004
        raise PatchGeometryError(f"patch distance must be >= 2, got {d}")
    tile_id = registry.allocate_tile(d, origin, patch_id)
    layout = layout_patch(registry, tile_id, kind, d, origin, orientation)
    logger.debug(
        "Built %s %s patch %s at %s: %d data, %d checks",
        kind.value,
        orientation.value,
        tile_id,
        origin,
        len(layout.data_qubits),
        len(layout.checks),
    )
    return layout


def logical_operators(p: PatchLayout) -> tuple[PauliString, PauliString]:
    """(X_L, Z_L) representatives of a patch."""
    return p.logical_x, p.logical_z


def generator_rank(p: PatchLayout) -> int:
    """GF(2) rank of the patch's stabilizer generators."""
    if not p.checks:
        return 0
    return gf2_rank(np.array([s.symplectic() for s in p.stabilizers]))


# --- syndrome extraction ---


def syndrome_circuit(p: PatchLayout, check_id: str) -> list[PhysicalOp]:
    """Ancilla circuit measuring one stabilizer.

    Z checks use H / CZ / H, X checks use H / CNOT / H, both ending in a Z
    measurement of the ancilla, which must start in |0>.

    Raises:
        UnknownStabilizerError: If the patch has no such check
    """
    try:
        check = p.check(check_id)
    except KeyError as e:
        raise UnknownStabilizerError(f"patch {p.patch_id} has no check {check_id!r}") from e
    anc = p.qubit_index[check.ancilla]
    coupling = "CZ" if check.letter == "Z" else "CNOT"
    ops = [PhysicalOp("H", (anc,))]
    ops.extend(PhysicalOp(coupling, (anc, p.qubit_index[c])) for c in check.support)
    ops.append(PhysicalOp("H", (anc,)))
    ops.append(PhysicalOp("MZ", (anc,)))
    return ops


def measure_syndromes(
    sim: Simulator,
    p: PatchLayout,
    mode: SyndromeMode = SyndromeMode.DIRECT,
    round_index: int = 1,
) -> SyndromeRecord:
    """Measure every stabilizer of a patch once."""
    record = SyndromeRecord(round=round_index)
    for check, stab in zip(p.checks, p.stabilizers, strict=True):
        if mode is SyndromeMode.DIRECT:
            value = sim.measure_pauli(stab).value
        else:
            value = _run_check_circuit(sim, p, check.check_id)
        record.values[check.check_id] = value
        record.letters[check.check_id] = check.letter
    return record


def _run_check_circuit(sim: Simulator, p: PatchLayout, check_id: str) -> int:
    anc = p.qubit_index[p.check(check_id).ancilla]
    sim.reset_qubits([anc])
    value = 1
    for op in syndrome_circuit(p, check_id):
        if op.name == "MZ":
            value = sim.measure_pauli(PauliString.from_sparse(p.n, {anc: "Z"})).value
        else:
            sim.apply_gate(op.name, op.qubits)
    sim.reset_qubits([anc])
    return value


def stabilize(
    sim: Simulator,
    p: PatchLayout,
    rounds: int = 1,
    mode: SyndromeMode = SyndromeMode.DIRECT,
) -> list[SyndromeRecord]:
    """Repeat syndrome measurement; noiseless rounds after the first repeat it."""
    if rounds < 1:
        raise PatchError(f"rounds must be >= 1, got {rounds}")
    return [measure_syndromes(sim, p, mode, round_index=k + 1) for k in range(rounds)]


# --- frame bookkeeping ---


def _support_matrix(p: PatchLayout, ops: Iterable[PauliString], letter: str) -> np.ndarray:
    data = p.data_indices()
    rows = [(op.z if letter == "Z" else op.x)[data] for op in ops]
    return np.array(rows, dtype=np.uint8).reshape(-1, len(data))


def pure_error(p: PatchLayout, record: SyndromeRecord) -> PauliString:
    """Pauli flipping exactly the -1 checks of a record, commuting with both logicals.

    Raises:
        FrameAlignmentError: If the checks and logicals are dependent
    """
    data = p.data_indices()
    x_bits = np.zeros(p.n, dtype=bool)
    z_bits = np.zeros(p.n, dtype=bool)
    for letter, fix_bits, logical in (("Z", x_bits, p.logical_z), ("X", z_bits, p.logical_x)):
        checks = [c for c in p.checks if c.letter == letter]
        stabs = p.z_stabilizers if letter == "Z" else p.x_stabilizers
        flips = [1 if record.values.get(c.check_id, 1) == -1 else 0 for c in checks]
        if not any(flips):
            continue
        system = _support_matrix(p, [*stabs, logical], letter)
        solution = gf2_solve(system, np.array([*flips, 0], dtype=np.uint8))
        if solution is None:
            raise FrameAlignmentError(f"no pure error for {letter} syndrome on {p.patch_id}")
        for k, idx in enumerate(data):
            if solution[k]:
                fix_bits[idx] = True
    return PauliString(x_bits, z_bits)


def align_frame(sim: Simulator, p: PatchLayout, record: SyndromeRecord) -> PauliString:
    """Return the patch to the all +1 code space without touching its logicals.

    Returns:
        The correction that was applied (identity when nothing flipped)
    """
    correction = pure_error(p, record)
    if not correction.is_identity():
        sim.apply_pauli(correction)
        logger.debug("Aligned %s: flipped %s", p.patch_id, ",".join(record.flipped()))
    return correction


def settle(
    sim: Simulator, p: PatchLayout, rounds: int = 1, mode: SyndromeMode = SyndromeMode.DIRECT
) -> list[SyndromeRecord]:
    """Stabilize, then align on the last round."""
    records = stabilize(sim, p, rounds, mode)
    align_frame(sim, p, records[-1])
    return records


def infer_sign(
    target: PauliString, generators: Sequence[PauliString], outcomes: Sequence[int]
) -> int | None:
    """Eigenvalue of target implied by measured commuting generators.

    Returns:
        +1 or -1, or None when target is not a product of the generators
    """
    if not generators:
        return target.sign if target.is_identity() else None
    system = np.array([g.symplectic() for g in generators], dtype=np.uint8).T
    coeffs = gf2_solve(system, target.symplectic())
    if coeffs is None:
        return None
    acc = PauliString.identity(target.n)
    value = 1
    for g, outcome, used in zip(generators, outcomes, coeffs, strict=True):
        if used:
            acc = acc * g
            value *= outcome
    # acc equals +-target; the relative sign multiplies the outcome product.
    relative = (acc.phase - target.phase) % 4
    return value if relative == 0 else -value


def logical_y(p: PatchLayout) -> PauliString:
    """Hermitian Y_L = i X_L Z_L."""
    xz = p.logical_x * p.logical_z
    return xz.with_phase(xz.phase + 1)


def logical_operator(p: PatchLayout, letter: str) -> PauliString:
    if letter == "X":
        return p.logical_x
    if letter == "Z":
        return p.logical_z
    if letter == "Y":
        return logical_y(p)
    raise PatchError(f"unknown logical letter {letter!r}")


def stabilizer_tags(query, k: int) -> list[str]:
    """Canonical signed generators of a k-qubit logical stabilizer group.

    Args:
        query: Callable mapping a letter string such as ``"XZ"`` to +1, -1 or None
        k: Number of logical qubits

    Returns:
        Labels like ``["+XX", "+ZZ"]``, greedily chosen lowest weight first
    """
    candidates = [
        "".join(letters)
        for letters in product(("I", *_CANDIDATE_LETTERS), repeat=k)
        if any(ch != "I" for ch in letters)
    ]
    order = {"I": 0, "X": 1, "Z": 2, "Y": 3}
    candidates.sort(key=lambda s: (sum(ch != "I" for ch in s), [order[ch] for ch in s]))

    chosen: list[np.ndarray] = []
    tags = []
    for letters in candidates:
        value = query(letters)
        if value is None:
            continue
        vec = PauliString.from_label(letters).symplectic()
        if gf2_rank(np.array([*chosen, vec])) == len(chosen) + 1:
            chosen.append(vec)
            tags.append(("+" if value == 1 else "-") + letters)
        if len(chosen) == k:
            break
    return tags


def logical_tags(sim: Simulator, patches: Sequence[PatchLayout]) -> list[str]:
    """Signed logical stabilizer generators of the joint state of patches."""

    def query(letters: str) -> int | None:
        op = PauliString.identity(patches[0].n)
        for patch, letter in zip(patches, letters, strict=True):
            if letter != "I":
                op = op * logical_operator(patch, letter)
        return sim.contains_stabilizer(op)

    return stabilizer_tags(query, len(patches))


def boundary_sides(p: PatchLayout, boundary: Boundary) -> list[Side]:
    return [side for side, tag in p.boundaries.items() if tag is boundary]
