"""Property suites behind ``latsurg verify``.

Each suite returns one CheckResult per property instance; a suite passes
when every check does.
"""

import itertools
from collections.abc import Callable
from dataclasses import dataclass
from functools import partial

from src.models.decoding import ErrorEvent
from src.models.gate import GateIR, GateKind
from src.models.patch import Orientation, PatchKind, PatchLayout
from src.models.pauli_string import PauliString
from src.services.circuit_parser import parse_circuit
from src.services.compiler import ScheduleConfig, schedule
from src.services.decoder import (
    build_decode_table,
    decode_and_correct,
    inject_error,
    is_logical_error,
    logical_error_rate,
)
from src.services.executor import Tier, execute_schedule
from src.services.grid_registry import GridRegistry
from src.services.patch_builder import (
    build_patch,
    logical_operator,
    logical_tags,
    measure_syndromes,
    stabilizer_tags,
)
from src.services.pauli_algebra import decompose_gate
from src.services.protocols import ProtocolService
from src.services.statevector import equal_up_to_global_phase, gate_matrix, rotation_product
from src.services.surgery import SEED_PREPARATIONS, SurgeryService
from src.services.tableau_simulator import Tableau
from src.utils.logging import get_logger

logger = get_logger(__name__)

GOLDEN_CIRCUIT = """\
# five-qubit tiled-layout example, qubits numbered from 0
qubits 5
T q0
T q1
H q4
CNOT q2 q0
X q0
S q1
H q2
CNOT q0 q1
CZ q3 q4
Z q3
S q4
"""

GOLDEN_STEPS = (
    ("inject Z_{pi/8}@q0", "inject Z_{pi/8}@q1", "inject Z_{pi/4}@q4"),
    ("inject X_{pi/4}@q4", "cnot(q2->q0)"),
    ("inject Z_{pi/4}@q4", "X_L@q0", "inject Z_{pi/4}@q1", "inject Z_{pi/4}@q2"),
    ("inject X_{pi/4}@q2", "cnot(q0->q1)"),
    ("inject Z_{pi/4}@q2", "cz(q3,q4)"),
    ("Z_L@q3", "inject Z_{pi/4}@q4"),
)
GOLDEN_METRICS = {"tiles_used": 6, "timesteps": 6}

_ROTATION_GATES = (
    GateIR(GateKind.X, (0,)),
    GateIR(GateKind.Y, (0,)),
    GateIR(GateKind.Z, (0,)),
    GateIR(GateKind.RX, (0,), angle=0.3),
    GateIR(GateKind.RY, (0,), angle=0.7),
    GateIR(GateKind.RZ, (0,), angle=1.1),
    GateIR(GateKind.H, (0,)),
    GateIR(GateKind.S, (0,)),
    GateIR(GateKind.T, (0,)),
    GateIR(GateKind.CNOT, (0, 1)),
    *(
        GateIR(GateKind.CPP, (0, 1), paulis=(p1, p2))
        for p1 in ("X", "Y", "Z")
        for p2 in ("X", "Y", "Z")
    ),
)

_PROTOCOL_INPUTS = (("0", "0"), ("1", "0"), ("+", "0"), ("0", "+"), ("+", "-"), ("i", "1"))


class UnknownSuiteError(Exception):
    """Raised for a suite name outside SUITES."""


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "check": self.name,
            "passed": self.passed,
            "detail": self.detail,
        }


# --- shared fixtures ---


def tile_canvas(d: int, slots: tuple[int, int], seed: int = 0) -> SurgeryService:
    """Surgery service over a canvas of rows x cols tile slots."""
    pitch = 2 * d + 2
    registry = GridRegistry(
        (slots[0] - 1) * pitch + 2 * d + 1, (slots[1] - 1) * pitch + 2 * d + 1
    )
    return SurgeryService(Tableau(registry.capacity, seed=seed), registry)


def protocol_bay(
    d: int, seed: int = 0, slots: tuple[int, int] = (2, 2)
) -> tuple[ProtocolService, PatchLayout, PatchLayout, PatchLayout]:
    """Fresh bay: control above TRN, target right of TRN, TRN in |+>_L.

    Returns:
        (protocols, control, trn, target); control and target hold raw |0> data
    """
    pitch = 2 * d + 2
    service = tile_canvas(d, slots, seed)
    registry = service.registry
    protocols = ProtocolService(service)
    control = build_patch(registry, PatchKind.ROTATED, d, (0, 0), Orientation.STANDARD, "c")
    trn = build_patch(registry, PatchKind.ROTATED, d, (pitch, 0), Orientation.STANDARD, "trn")
    target = build_patch(registry, PatchKind.ROTATED, d, (pitch, pitch), Orientation.STANDARD, "t")
    protocols.reset_plus(trn)
    return protocols, control, trn, target


def ideal_tags(seeds: tuple[str, str], gate: str) -> list[str]:
    """Logical tags of a two-qubit product state after an ideal CNOT or CZ."""
    t = Tableau(2, seed=0)
    for q, label in enumerate(seeds):
        for g in SEED_PREPARATIONS[label]:
            t.apply_gate(g, (q,))
    t.apply_gate(gate, (0, 1))

    def query(letters: str) -> int | None:
        return t.contains_stabilizer(PauliString.from_label(letters))

    return stabilizer_tags(query, 2)


# --- suites ---


def suite_rotations() -> list[CheckResult]:
    """Rotation decompositions against canonical gate matrices."""
    results = []
    for g in _ROTATION_GATES:
        n = len(g.qubits)
        terms = decompose_gate(g)
        ok = equal_up_to_global_phase(rotation_product(terms, n), gate_matrix(g, n))
        results.append(CheckResult("table1", g.label(), ok, f"{len(terms)} term(s)"))
    return results


def suite_surgery(distances: tuple[int, ...] = (2, 3), seeds: int = 100) -> list[CheckResult]:
    """Merge outcomes, merge conservation, split round trips and injection."""
    results = []
    for d in distances:
        for kind, labels, spectators in (
            ("rough", ("+", "-"), ("0", "1")),
            ("smooth", ("0", "1"), ("+", "-")),
        ):
            for pair in itertools.product(labels, repeat=2):
                results.append(
                    _seeded_check(
                        f"d={d} {kind} merge |{pair[0]}>|{pair[1]}>",
                        seeds,
                        partial(_merge_reveals, d, kind, pair),
                    )
                )
                results.append(
                    _seeded_check(
                        f"d={d} {kind} split |{pair[0]}>|{pair[1]}>",
                        seeds,
                        partial(_split_restores, d, kind, pair),
                    )
                )
            for pair in itertools.product(spectators, repeat=2):
                results.append(
                    _seeded_check(
                        f"d={d} {kind} conservation |{pair[0]}>|{pair[1]}>",
                        seeds,
                        partial(_merge_conserves, d, kind, pair),
                    )
                )
        for label in sorted(SEED_PREPARATIONS):
            results.append(
                _seeded_check(
                    f"d={d} inject |{label}>",
                    seeds,
                    partial(_injection_holds, d, label),
                )
            )
    return results


def _seeded_check(name: str, seeds: int, check: Callable[[int], bool]) -> CheckResult:
    failures = sum(not check(seed) for seed in range(seeds))
    return CheckResult("surgery", name, failures == 0, f"{seeds - failures}/{seeds} seeds")


def _merge_pair(
    d: int, kind: str, labels: tuple[str, str], seed: int
) -> tuple[SurgeryService, PatchLayout, PatchLayout]:
    pitch = 2 * d + 2
    rough = kind == "rough"
    service = tile_canvas(d, (1, 2) if rough else (2, 1), seed)
    origin_b = (0, pitch) if rough else (pitch, 0)
    a = build_patch(service.registry, PatchKind.ROTATED, d, (0, 0), patch_id="a")
    b = build_patch(service.registry, PatchKind.ROTATED, d, origin_b, patch_id="b")
    service.inject_state(a, labels[0])
    service.inject_state(b, labels[1])
    return service, a, b


def _merge(service: SurgeryService, kind: str, a: PatchLayout, b: PatchLayout):
    return service.rough_merge(a, b) if kind == "rough" else service.smooth_merge(a, b)


def _merge_reveals(d: int, kind: str, labels: tuple[str, str], seed: int) -> bool:
    """The joint outcome equals the eigenvalue product and is a stabilizer afterwards."""
    expected = 1 if labels[0] == labels[1] else -1
    service, a, b = _merge_pair(d, kind, labels, seed)
    merge = _merge(service, kind, a, b)
    letter = merge.joint_operator.letter
    joint = logical_operator(a, letter) * logical_operator(b, letter)
    return merge.joint_outcome == expected and service.sim.contains_stabilizer(joint) == expected


def _merge_conserves(d: int, kind: str, labels: tuple[str, str], seed: int) -> bool:
    """The merged logical along the seam normal keeps the pre-merge product."""
    expected = 1 if labels[0] == labels[1] else -1
    service, a, b = _merge_pair(d, kind, labels, seed)
    merged = _merge(service, kind, a, b).merged
    kept = merged.logical_z if kind == "rough" else merged.logical_x
    return service.sim.contains_stabilizer(kept) == expected


def _split_restores(d: int, kind: str, labels: tuple[str, str], seed: int) -> bool:
    """Merge then split returns eigenstates of the joint letter to their tags."""
    service, a, b = _merge_pair(d, kind, labels, seed)
    before = logical_tags(service.sim, [a, b])
    merge = _merge(service, kind, a, b)
    split = service.rough_split(merge) if kind == "rough" else service.smooth_split(merge)
    if split.has_byproduct:
        service.sim.apply_pauli(split.byproduct)
    return logical_tags(service.sim, [split.left, split.right]) == before


def _injection_holds(d: int, label: str, seed: int) -> bool:
    service = tile_canvas(d, (1, 1), seed)
    p = build_patch(service.registry, PatchKind.ROTATED, d, (0, 0), patch_id="p")
    service.inject_state(p, label)
    reference = Tableau(1, seed=0)
    for g in SEED_PREPARATIONS[label]:
        reference.apply_gate(g, (0,))
    expected = stabilizer_tags(
        lambda letters: reference.contains_stabilizer(PauliString.from_label(letters)), 1
    )
    return logical_tags(service.sim, [p]) == expected


# CZ parks TRN below the target, so its bay carries a workspace row.
CZ_BAY_SLOTS = (4, 3)
_BRANCH_KEYS = {
    "CNOT": (("smooth_merge", "zz"), ("rough_merge", "xx"), ("measure_logical", "z")),
    "CZ": (("smooth_merge", "zz"), ("smooth_merge", "zx"), ("measure_logical", "x")),
}


def suite_cnot(distances: tuple[int, ...] = (2, 3), trials: int = 200) -> list[CheckResult]:
    """CNOT and CZ protocols against ideal gates, with outcome-branch coverage.

    Each (gate, distance) pair runs ``trials`` seeded protocols, cycling
    through the input pairs.
    """
    results = []
    for gate in ("CNOT", "CZ"):
        for d in distances:
            branches: set[tuple[int, ...]] = set()
            failures: dict[tuple[str, str], int] = dict.fromkeys(_PROTOCOL_INPUTS, 0)
            runs: dict[tuple[str, str], int] = dict.fromkeys(_PROTOCOL_INPUTS, 0)
            for seed in range(trials):
                inputs = _PROTOCOL_INPUTS[seed % len(_PROTOCOL_INPUTS)]
                slots = CZ_BAY_SLOTS if gate == "CZ" else (2, 2)
                protocols, control, trn, target = protocol_bay(d, seed, slots)
                protocols.surgery.inject_state(control, inputs[0])
                protocols.surgery.inject_state(target, inputs[1])
                if gate == "CNOT":
                    trace = protocols.logical_cnot(control, target, trn)
                else:
                    trace = protocols.logical_cz(control, target, trn)
                branches.add(tuple(trace.outcome(*key) for key in _BRANCH_KEYS[gate]))
                runs[inputs] += 1
                if logical_tags(protocols.sim, [control, target]) != ideal_tags(inputs, gate):
                    failures[inputs] += 1
            for inputs, count in runs.items():
                if not count:
                    continue
                results.append(
                    CheckResult(
                        "cnot",
                        f"{gate} d={d} |{inputs[0]}>|{inputs[1]}>",
                        failures[inputs] == 0,
                        f"expected {ideal_tags(inputs, gate)}, "
                        f"{count - failures[inputs]}/{count} seeds",
                    )
                )
            results.append(
                CheckResult(
                    "cnot",
                    f"{gate} d={d} outcome branches",
                    len(branches) == 8,  # noqa: PLR2004
                    f"{len(branches)}/8 seen",
                )
            )
    return results


def suite_decoder(
    trials: int = 100_000, physical_p: float = 1e-2, seed: int = 0
) -> list[CheckResult]:
    """Exhaustive single-Pauli correction at d=3 and the d=2 / d=3 rate ordering."""
    results = []
    service = tile_canvas(3, (1, 1), seed)
    sim = service.sim
    p = build_patch(service.registry, PatchKind.ROTATED, 3, (0, 0), patch_id="p")
    service.settle(p)
    table = build_decode_table(p, max_weight=1)

    corrected = 0
    for cell in sorted(p.data_qubits):
        for letter in ("X", "Y", "Z"):
            trial = sim.copy()
            error = inject_error(trial, p, ErrorEvent(cell, letter))
            result = decode_and_correct(trial, p, measure_syndromes(trial, p), table)
            again = decode_and_correct(trial, p, measure_syndromes(trial, p), table)
            clean = all(trial.contains_stabilizer(s) == 1 for s in p.stabilizers)
            if (
                clean
                and not result.flagged
                and again.correction.is_identity()
                and not is_logical_error(p, error * result.correction)
            ):
                corrected += 1
    total = 3 * len(p.data_qubits)
    results.append(
        CheckResult(
            "decoder", "d=3 single-Pauli corrections", corrected == total, f"{corrected}/{total}"
        )
    )

    rates = {}
    for d in (2, 3):
        reg = GridRegistry(2 * d + 1, 2 * d + 1)
        patch = build_patch(reg, PatchKind.ROTATED, d, (0, 0), patch_id=f"d{d}")
        rates[d] = logical_error_rate(patch, physical_p, trials, seed)
    sigma = (rates[2].stderr ** 2 + rates[3].stderr ** 2) ** 0.5
    gap = rates[2].rate - rates[3].rate
    results.append(
        CheckResult(
            "decoder",
            f"rate ordering at p={physical_p:g}",
            gap > 3 * sigma,
            f"d=2 {rates[2].rate:.4g} vs d=3 {rates[3].rate:.4g}, "
            f"gap {gap:.3g}, 3 sigma {3 * sigma:.3g}",
        )
    )
    return results


def suite_golden() -> list[CheckResult]:
    """Five-qubit compilation: step contents, metrics, logical-tier fidelity."""
    s = schedule(parse_circuit(GOLDEN_CIRCUIT), ScheduleConfig(distance=2))
    results = [CheckResult("golden", "metrics", s.metrics == GOLDEN_METRICS, str(s.metrics))]
    got = tuple(tuple(a.describe() for a in step.actions) for step in s.steps)
    for k, want in enumerate(GOLDEN_STEPS, start=1):
        have = got[k - 1] if k <= len(got) else ()
        results.append(CheckResult("golden", f"step {k}", have == want, "; ".join(have)))
    run = execute_schedule(s, Tier.LOGICAL)
    fidelity = run.summary.get("fidelity", 0.0)
    results.append(CheckResult("golden", "logical fidelity", fidelity >= 1 - 1e-8, f"{fidelity}"))
    return results


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "table1": suite_rotations,
    "surgery": suite_surgery,
    "cnot": suite_cnot,
    "decoder": suite_decoder,
    "golden": suite_golden,
}


def run_suite(name: str) -> list[CheckResult]:
    """Run a suite by name.

    Raises:
        UnknownSuiteError: If name is not in SUITES
    """
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}, expected one of {sorted(SUITES)}")
    results = SUITES[name]()
    passed = sum(r.passed for r in results)
    logger.info("Suite %s: %d/%d checks passed", name, passed, len(results))
    return results
