"""Circuit to surgery-schedule compilation.

Single-qubit gates become injections of their rotation terms, X and Z pass
through as logical Paulis, and CNOT / CZ become TRN-mediated protocol
actions. Placement is greedy: each action takes the earliest step after its
qubits' previous actions at which every tile it claims is free. A single-qubit
action claims its own tile; a TRN-mediated action claims a TRN tile and every
qubit tile in the bounding box of its operands.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from src.models.gate import CircuitIR, GateIR, GateKind, RotationTerm
from src.models.schedule import (
    ActionKind,
    ScheduleAction,
    SurgerySchedule,
    SurgeryStep,
    TileInfo,
    TileKind,
    qubit_tile,
)
from src.services.pauli_algebra import decompose_gate
from src.utils.logging import get_logger

logger = get_logger(__name__)

_QUARTER = Fraction(1, 4)


class ScheduleError(Exception):
    """Base exception for scheduling errors."""


class InsufficientGridError(ScheduleError):
    """Raised when the tile canvas cannot hold every qubit and TRN tile."""


class NoTrnError(ScheduleError):
    """Raised when two-qubit gates are present but no TRN tile is configured."""


@dataclass(frozen=True)
class ScheduleConfig:
    """Compilation settings.

    Attributes:
        distance: Code distance of every tile
        grid: ``"auto"`` or ``"ROWSxCOLS"`` in tile slots
        trn_count: Number of transitional tiles
    """

    distance: int = 2
    grid: str = "auto"
    trn_count: int = 1

    def __post_init__(self) -> None:
        """Validate values."""
        if self.distance < 2:  # noqa: PLR2004
            raise ValueError(f"distance must be >= 2, got {self.distance}")
        if self.trn_count < 0:
            raise ValueError(f"trn_count must be >= 0, got {self.trn_count}")
        if self.grid != "auto":
            parse_grid(self.grid)


def parse_grid(text: str) -> tuple[int, int]:
    """Parse ``"ROWSxCOLS"``.

    Raises:
        ValueError: On malformed text
    """
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):  # noqa: PLR2004
        raise ValueError(f"grid must look like ROWSxCOLS, got {text!r}")
    rows, cols = int(parts[0]), int(parts[1])
    if rows < 1 or cols < 1:
        raise ValueError(f"grid dimensions must be positive, got {text!r}")
    return rows, cols


def format_gate(g: GateIR) -> str:
    """Circuit-text line for a gate."""
    qubits = " ".join(f"q{q}" for q in g.qubits)
    if g.kind.is_rotation:
        return f"{g.kind.value}({g.angle!r}) {qubits}"
    if g.kind is GateKind.CPP and g.paulis is not None:
        return f"CPP {g.paulis[0]}{g.paulis[1]} {qubits}"
    return f"{g.kind.value} {qubits}"


def decompose_circuit(c: CircuitIR) -> list[RotationTerm]:
    """Rotation terms of every gate, in circuit order; two-qubit terms stay two-qubit."""
    terms: list[RotationTerm] = []
    for g in c.gates:
        terms.extend(decompose_gate(g))
    return terms


# --- lowering ---


def _basis_change(letter: str, q: int, inverse: bool) -> list[ScheduleAction]:
    """Injections mapping Z to the given Pauli (or back)."""
    h = decompose_gate(GateIR(GateKind.H, (q,)))
    if letter == "Z":
        return []
    if letter == "X":
        terms = h
    elif inverse:
        terms = [RotationTerm.dyadic("Z", -_QUARTER, (q,)), *h]
    else:
        terms = [*h, RotationTerm.dyadic("Z", _QUARTER, (q,))]
    return [ScheduleAction(ActionKind.INJECT, (q,), rotation=t) for t in terms]


def lower_gate(g: GateIR) -> list[ScheduleAction]:
    """Schedule actions for one gate, in execution order. TRN ids are filled in later."""
    q = g.qubits
    if g.kind is GateKind.X:
        return [ScheduleAction(ActionKind.LOGICAL_PAULI, q, pauli="X_L")]
    if g.kind is GateKind.Z:
        return [ScheduleAction(ActionKind.LOGICAL_PAULI, q, pauli="Z_L")]
    if g.kind is GateKind.CNOT:
        return [ScheduleAction(ActionKind.CNOT, q, trn="?")]
    if g.kind is GateKind.CZ:
        return [ScheduleAction(ActionKind.CZ, q, trn="?")]
    if g.kind is GateKind.CPP and g.paulis is not None:
        p1, p2 = g.paulis
        if (p1, p2) == ("Z", "X"):
            return [ScheduleAction(ActionKind.CNOT, q, trn="?")]
        if (p1, p2) == ("X", "Z"):
            return [ScheduleAction(ActionKind.CNOT, (q[1], q[0]), trn="?")]
        return [
            *_basis_change(p1, q[0], inverse=True),
            *_basis_change(p2, q[1], inverse=True),
            ScheduleAction(ActionKind.CZ, q, trn="?"),
            *_basis_change(p1, q[0], inverse=False),
            *_basis_change(p2, q[1], inverse=False),
        ]
    return [ScheduleAction(ActionKind.INJECT, q, rotation=t) for t in decompose_gate(g)]


# --- placement ---


def _canvas(
    n_qubits: int, config: ScheduleConfig
) -> tuple[tuple[int, int], dict[str, TileInfo]]:
    trn = config.trn_count
    if config.grid == "auto":
        qcols = max(1, math.isqrt(n_qubits - 1) + 1) if n_qubits else 1
        rows = max(math.ceil(n_qubits / qcols), trn, 1)
        cols = qcols + (1 if trn else 0)
    else:
        rows, cols = parse_grid(config.grid)
        qcols = cols - (1 if trn else 0)
        if qcols < 1 or rows * qcols < n_qubits or rows < trn:
            raise InsufficientGridError(
                f"grid {config.grid} cannot hold {n_qubits} qubit tiles and {trn} TRN tile(s)"
            )
    tiles = {
        qubit_tile(q): TileInfo(TileKind.QUBIT, (q // qcols, q % qcols), q)
        for q in range(n_qubits)
    }
    for k in range(trn):
        tiles[f"trn{k}"] = TileInfo(TileKind.TRN, (k, qcols))
    return (rows, cols), tiles


def _corridor(tiles: dict[str, TileInfo], qubits: tuple[int, ...]) -> set[str]:
    """Qubit tiles inside the bounding box of the operand slots."""
    slots = [tiles[qubit_tile(q)].slot for q in qubits]
    rows = range(min(r for r, _ in slots), max(r for r, _ in slots) + 1)
    cols = range(min(c for _, c in slots), max(c for _, c in slots) + 1)
    return {
        tid
        for tid, info in tiles.items()
        if info.kind is TileKind.QUBIT and info.slot[0] in rows and info.slot[1] in cols
    }


def schedule(c: CircuitIR, config: ScheduleConfig | None = None) -> SurgerySchedule:
    """Greedy stepwise schedule of a circuit.

    Raises:
        InsufficientGridError: If the canvas is too small
        NoTrnError: If two-qubit gates need a TRN tile and none is configured
    """
    config = config or ScheduleConfig()
    grid, tiles = _canvas(c.n_qubits, config)
    trns = [tid for tid, info in tiles.items() if info.kind is TileKind.TRN]

    last: dict[int, int] = {}
    busy: dict[int, set[str]] = {}
    trn_use: dict[int, set[str]] = {}
    placed: dict[int, list[ScheduleAction]] = {}

    for g in c.gates:
        for action in lower_gate(g):
            step = max((last.get(q, 0) for q in action.qubits), default=0) + 1
            if action.kind.uses_trn:
                if not trns:
                    raise NoTrnError(
                        f"{g.label()} on {list(g.qubits)} needs a TRN tile but trn_count is 0"
                    )
                claim = _corridor(tiles, action.qubits)
                while claim & busy.get(step, set()) or all(
                    t in trn_use.get(step, set()) for t in trns
                ):
                    step += 1
                trn = next(t for t in trns if t not in trn_use.get(step, set()))
                trn_use.setdefault(step, set()).add(trn)
                action = ScheduleAction(action.kind, action.qubits, trn=trn)  # noqa: PLW2901
            else:
                claim = {qubit_tile(q) for q in action.qubits}
                while claim & busy.get(step, set()):
                    step += 1
            busy.setdefault(step, set()).update(claim)
            for q in action.qubits:
                last[q] = step
            placed.setdefault(step, []).append(action)

    steps = [
        SurgeryStep(index, placed.get(index, []), sorted(trn_use.get(index, set())))
        for index in range(1, max(placed, default=0) + 1)
    ]
    result = SurgerySchedule(
        grid=grid,
        distance=config.distance,
        tiles=tiles,
        steps=steps,
        n_qubits=c.n_qubits,
        circuit=[format_gate(g) for g in c.gates],
    )
    logger.info(
        "Scheduled %d gates into %d steps on %d tiles",
        len(c.gates),
        len(steps),
        len(tiles),
    )
    return result


def resources(s: SurgerySchedule) -> dict[str, int]:
    """Tiles used and time steps."""
    return s.metrics
