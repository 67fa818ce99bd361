"""Schedule execution at the physical (tableau) or logical (dense) tier.

The physical tier keeps one rotated patch per logical qubit in storage
tiles and runs two-qubit protocols in a fixed bay: slot C above the TRN
tile and slot T to its right. A workspace row below the bay holds the
Hadamard slot and the slot TRN visits during CZ; both need room to grow
while a patch is realigned. Operands are moved in and out with data
SWAPs. Steps execute action by action; spatial parallelism in a step is a
property of the schedule, not of the simulation.

A qubit that has only seen single-qubit actions is tracked as a 2-vector
and injected when it first takes part in a protocol, so start-of-circuit
rotations cost one injection.
"""

import json
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from src.models.gate import RotationTerm
from src.models.patch import Orientation, PatchKind, PatchLayout
from src.models.pauli_string import PauliString
from src.models.protocol_trace import ProtocolTrace
from src.models.schedule import ActionKind, ScheduleAction, SurgerySchedule, SurgeryStep
from src.services.circuit_parser import parse_circuit
from src.services.dense_simulator import DenseSimulator
from src.services.grid_registry import GridRegistry
from src.services.patch_builder import SyndromeMode, build_patch, logical_tags
from src.services.protocols import ProtocolService, match_seed
from src.services.simulator import CapacityError
from src.services.statevector import (
    LETTER_MATRICES,
    fidelity,
    local_gate_matrix,
    rotation_matrix,
)
from src.services.surgery import SurgeryService
from src.services.tableau_simulator import Tableau
from src.utils.logging import get_logger

logger = get_logger(__name__)

BAY_CONTROL = (0, 0)
BAY_TRN = (1, 0)
BAY_TARGET = (1, 1)
BAY_HADAMARD = (2, 0)
_KET_ZERO = np.array([1, 0], dtype=np.complex128)


class ExecutionError(Exception):
    """Base exception for schedule execution."""


class UnsupportedAtTierError(ExecutionError):
    """Raised when a step cannot run at the requested tier."""

    def __init__(self, step: int, message: str) -> None:
        super().__init__(f"step {step}: {message}")
        self.step = step


class Tier(Enum):
    PHYSICAL = "physical"
    LOGICAL = "logical"


@dataclass
class ExecutionResult:
    """Log records and summary of one run.

    Attributes:
        tier: Execution tier
        seed: Outcome-stream seed
        log: One JSON-ready record per executed action
        summary: Final record (tags for physical runs, fidelity for logical ones)
        simulator: Final simulator, for inspection
    """

    tier: Tier
    seed: int
    log: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    simulator: object | None = None

    def lines(self) -> Iterator[str]:
        """JSON lines: every log record, then the summary."""
        for record in self.log:
            yield json.dumps(record, sort_keys=False)
        yield json.dumps(self.summary, sort_keys=False)


def execute_schedule(
    s: SurgerySchedule,
    tier: Tier,
    seed: int = 0,
    rounds: int = 1,
    dense_limit: int = 20,
) -> ExecutionResult:
    """Run a schedule.

    Raises:
        UnsupportedAtTierError: When the physical tier meets a non-stabilizer state
    """
    if tier is Tier.LOGICAL:
        return LogicalExecutor(s, seed, dense_limit).run()
    return PhysicalExecutor(s, seed, rounds).run()


# --- logical tier ---


class LogicalExecutor:
    """Exact state-vector execution on one qubit per logical qubit."""

    def __init__(self, s: SurgerySchedule, seed: int = 0, dense_limit: int = 20) -> None:
        self.schedule = s
        self.seed = seed
        n = max(s.n_qubits, 1)
        try:
            self.sim = DenseSimulator(n, seed=seed, max_qubits=dense_limit)
        except CapacityError as e:
            raise ExecutionError(str(e)) from e

    def _apply(self, action: ScheduleAction) -> dict[str, int]:
        q = action.qubits
        if action.kind is ActionKind.INJECT and action.rotation is not None:
            self.sim.apply_unitary(rotation_matrix(action.rotation).matrix, q)
        elif action.kind is ActionKind.LOGICAL_PAULI and action.pauli is not None:
            self.sim.apply_gate(action.pauli[0], q)
        elif action.kind is ActionKind.CNOT:
            self.sim.apply_gate("CNOT", q)
        elif action.kind is ActionKind.CZ:
            self.sim.apply_gate("CZ", q)
        elif action.kind is ActionKind.MEASURE and action.basis is not None:
            p = PauliString.from_sparse(self.sim.n, {q[0]: action.basis})
            return {"outcome": self.sim.measure_pauli(p).value}
        return {}

    def reference_state(self):
        """State of the embedded source circuit applied to |0...0>, or None."""
        s = self.schedule
        if not s.circuit or any(
            a.kind is ActionKind.MEASURE for step in s.steps for a in step.actions
        ):
            return None
        circuit = parse_circuit("\n".join([f"qubits {s.n_qubits}", *s.circuit]))
        ref = DenseSimulator(self.sim.n, seed=self.seed, max_qubits=self.sim.n)
        for g in circuit.gates:
            ref.apply_unitary(local_gate_matrix(g), g.qubits)
        return ref.state

    def run(self) -> ExecutionResult:
        result = ExecutionResult(Tier.LOGICAL, self.seed, simulator=self.sim)
        for step in self.schedule.steps:
            for action in step.actions:
                outcomes = self._apply(action)
                result.log.append(_record(step, action, Tier.LOGICAL, outcomes=outcomes))
        summary = {
            "summary": True,
            "tier": Tier.LOGICAL.value,
            "seed": self.seed,
            "steps": len(self.schedule.steps),
        }
        reference = self.reference_state()
        if reference is not None:
            summary["fidelity"] = round(fidelity(self.sim.state, reference), 12)
        result.summary = summary
        logger.info("Logical run finished: %d steps", len(self.schedule.steps))
        return result


# --- physical tier ---


def storage_slot(q: int) -> tuple[int, int]:
    """Tile slot of qubit q's resting patch; slot parity matches the bay slots."""
    return (q % 2, q + 2)


class PhysicalExecutor:
    """Tableau execution through the surgery protocols."""

    def __init__(self, s: SurgerySchedule, seed: int = 0, rounds: int = 1) -> None:
        self.schedule = s
        self.seed = seed
        d = s.distance
        self.pitch = 2 * d + 2
        n = s.n_qubits
        grown = SurgeryService.realign_distance(d)
        slots = n + 3
        workspace = 2 * (grown * grown + (grown + 1) ** 2) + 2 * d
        capacity = slots * (d * d + (d + 1) ** 2) + 2 * d + workspace
        rows = 2 * self.pitch + 2 * grown + 1
        cols = (n + 1) * self.pitch + 2 * d + 1
        self.registry = GridRegistry(rows, cols, capacity)
        self.sim = Tableau(capacity, seed=seed)
        self.surgery = SurgeryService(self.sim, self.registry, rounds, SyndromeMode.DIRECT)
        self.protocols = ProtocolService(self.surgery)

        self.patches: dict[int, PatchLayout] = {
            q: self._build(f"q{q}", storage_slot(q)) for q in range(n)
        }
        self.trn = self._build("trn", BAY_TRN)
        self.protocols.reset_plus(self.trn)
        self.fresh: dict[int, np.ndarray] = {q: _KET_ZERO.copy() for q in range(n)}

    def _origin(self, slot: tuple[int, int]) -> tuple[int, int]:
        return (slot[0] * self.pitch, slot[1] * self.pitch)

    def _build(self, patch_id: str, slot: tuple[int, int]) -> PatchLayout:
        return build_patch(
            self.registry,
            PatchKind.ROTATED,
            self.schedule.distance,
            self._origin(slot),
            Orientation.STANDARD,
            patch_id,
        )

    # --- qubit state ---

    def _materialize(self, q: int, step: SurgeryStep) -> None:
        vec = self.fresh.pop(q, None)
        if vec is None:
            return
        label = match_seed(vec)
        if label is None:
            raise UnsupportedAtTierError(
                step.index, f"q{q} holds a non-stabilizer state the tableau cannot carry"
            )
        self.surgery.inject_state(self.patches[q], label)

    def _update_fresh(self, q: int, matrix: np.ndarray, step: SurgeryStep) -> None:
        vec = matrix @ self.fresh[q]
        vec = vec / np.linalg.norm(vec)
        if match_seed(vec) is None:
            raise UnsupportedAtTierError(
                step.index, f"rotation on q{q} leaves a non-stabilizer state"
            )
        self.fresh[q] = vec

    # --- bay transport ---

    def _to_bay(self, q: int, slot: tuple[int, int]) -> PatchLayout:
        self.patches[q] = self.surgery.move_patch(self.patches[q], self._origin(slot))
        return self.patches[q]

    def _to_storage(self, q: int) -> None:
        self.patches[q] = self.surgery.move_patch(
            self.patches[q], self._origin(storage_slot(q))
        )

    # --- live Clifford rotations ---

    def _quarter_z(self, q: int, dagger: bool, trace: ProtocolTrace) -> None:
        p = self._to_bay(q, BAY_CONTROL)
        trace.extend(self.protocols.logical_s(p, self.trn, dagger))
        self._to_storage(q)

    def _hadamard(self, q: int, trace: ProtocolTrace) -> None:
        p = self._to_bay(q, BAY_HADAMARD)
        trace.extend(self.protocols.logical_h(p))
        self._to_storage(q)

    def _live_rotation(self, q: int, r: RotationTerm, step: SurgeryStep) -> ProtocolTrace:
        if not r.is_clifford or r.pi_fraction is None:
            raise UnsupportedAtTierError(
                step.index, f"non-Clifford rotation {r.label()} on live qubit q{q}"
            )
        trace = ProtocolTrace(f"rotation_{r.axis.lower()}")
        quarters = int(r.pi_fraction * 4) % 4
        axis = r.axis
        p = self.patches[q]
        if quarters == 0 or axis == "I":
            return trace
        if quarters == 2:  # noqa: PLR2004
            for letter in ("X", "Z") if axis == "Y" else (axis,):
                trace.extend(self.protocols.logical_pauli(p, letter))
            return trace
        dagger = quarters == 3  # noqa: PLR2004
        if axis == "Z":
            self._quarter_z(q, dagger, trace)
        elif axis == "X":
            self._hadamard(q, trace)
            self._quarter_z(q, dagger, trace)
            self._hadamard(q, trace)
        else:
            self._quarter_z(q, True, trace)
            self._hadamard(q, trace)
            self._quarter_z(q, dagger, trace)
            self._hadamard(q, trace)
            self._quarter_z(q, False, trace)
        return trace

    # --- actions ---

    def _apply(self, action: ScheduleAction, step: SurgeryStep) -> dict:
        q = action.qubits
        if action.kind is ActionKind.INJECT and action.rotation is not None:
            if q[0] in self.fresh:
                self._update_fresh(q[0], rotation_matrix(action.rotation).matrix, step)
                return {"fresh": True}
            return {"trace": self._live_rotation(q[0], action.rotation, step).to_dict()}

        if action.kind is ActionKind.LOGICAL_PAULI and action.pauli is not None:
            letter = action.pauli[0]
            if q[0] in self.fresh:
                self._update_fresh(q[0], LETTER_MATRICES[letter], step)
                return {"fresh": True}
            return {"trace": self.protocols.logical_pauli(self.patches[q[0]], letter).to_dict()}

        for qubit in q:
            self._materialize(qubit, step)

        if action.kind is ActionKind.MEASURE and action.basis is not None:
            return {"outcome": self.protocols.measure_logical(self.patches[q[0]], action.basis)}

        a, b = q
        upper = self._to_bay(a, BAY_CONTROL)
        right = self._to_bay(b, BAY_TARGET)
        if action.kind is ActionKind.CNOT:
            trace = self.protocols.logical_cnot(upper, right, self.trn)
        else:
            trace = self.protocols.logical_cz(upper, right, self.trn)
        self._to_storage(a)
        self._to_storage(b)
        return {"trace": trace.to_dict()}

    def run(self) -> ExecutionResult:
        result = ExecutionResult(Tier.PHYSICAL, self.seed, simulator=self.sim)
        for step in self.schedule.steps:
            for action in step.actions:
                details = self._apply(action, step)
                result.log.append(_record(step, action, Tier.PHYSICAL, **details))
        last = self.schedule.steps[-1] if self.schedule.steps else SurgeryStep(1)
        for q in sorted(self.fresh):
            self._materialize(q, last)
        ordered = [self.patches[q] for q in range(self.schedule.n_qubits)]
        tags = logical_tags(self.sim, ordered) if ordered else []
        result.summary = {
            "summary": True,
            "tier": Tier.PHYSICAL.value,
            "seed": self.seed,
            "steps": len(self.schedule.steps),
            "tags": tags,
        }
        logger.info("Physical run finished: tags %s", tags)
        return result


def _record(step: SurgeryStep, action: ScheduleAction, tier: Tier, **details) -> dict:
    record = {"step": step.index, "tier": tier.value, "action": action.describe()}
    record.update(details)
    return record
