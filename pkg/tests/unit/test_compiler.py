"""Unit tests for circuit-to-schedule compilation."""

import pytest

from src.models.gate import GateIR, GateKind
from src.models.schedule import ActionKind, TileKind
from src.services.circuit_parser import parse_circuit
from src.services.compiler import (
    InsufficientGridError,
    NoTrnError,
    ScheduleConfig,
    decompose_circuit,
    format_gate,
    lower_gate,
    parse_grid,
    resources,
)
from src.services.verifier import GOLDEN_CIRCUIT, GOLDEN_METRICS, GOLDEN_STEPS


def _described(s):
    return [tuple(a.describe() for a in step.actions) for step in s.steps]


class TestGolden:
    """Tests for the five-qubit reference layout."""

    def test_steps(self, make_schedule):
        """The reference circuit compiles to the known six steps."""
        s = make_schedule(GOLDEN_CIRCUIT)
        assert _described(s) == list(GOLDEN_STEPS)
        assert s.metrics == GOLDEN_METRICS

    def test_trn_resets(self, make_schedule):
        """TRN is reset after every step that used it."""
        s = make_schedule(GOLDEN_CIRCUIT)
        assert [step.resets for step in s.steps] == [[], ["trn0"], [], ["trn0"], ["trn0"], []]

    def test_auto_canvas(self, make_schedule):
        """Five qubits fill a 2x3 block with the TRN column on the right."""
        s = make_schedule(GOLDEN_CIRCUIT)
        assert s.grid == (2, 4)
        assert s.tiles["q3"].slot == (1, 0)
        assert s.tiles["q4"].slot == (1, 1)
        assert s.tiles["trn0"].slot == (0, 3)
        assert s.tiles["trn0"].kind is TileKind.TRN
        assert s.circuit[0] == "T q0"


class TestSchedule:
    """Tests for greedy placement."""

    def test_bell(self, make_schedule):
        """H takes three injection steps before the CNOT."""
        s = make_schedule()
        assert _described(s) == [
            ("inject Z_{pi/4}@q0",),
            ("inject X_{pi/4}@q0",),
            ("inject Z_{pi/4}@q0",),
            ("cnot(q0->q1)",),
        ]
        assert resources(s) == {"tiles_used": 3, "timesteps": 4}
        assert s.grid == (1, 3)

    def test_disjoint_single_qubit_packs_with_cnot(self, make_schedule):
        """A gate on a tile outside the CNOT's corridor shares its step."""
        s = make_schedule("qubits 3\nCNOT q0 q1\nT q2\n")
        assert _described(s) == [("cnot(q0->q1)", "inject Z_{pi/8}@q2")]
        assert s.metrics["timesteps"] == 1

    def test_corridor_tile_waits_for_cnot(self, make_schedule):
        """A tile between the CNOT operands is busy during that step."""
        s = make_schedule("qubits 3\nCNOT q0 q2\nT q1\n", grid="1x4")
        assert _described(s) == [("cnot(q0->q2)",), ("inject Z_{pi/8}@q1",)]

    def test_earlier_gate_on_corridor_tile_delays_cnot(self, make_schedule):
        """A CNOT waits until its corridor is clear."""
        s = make_schedule("qubits 3\nT q1\nCNOT q0 q2\n", grid="1x4")
        assert _described(s) == [("inject Z_{pi/8}@q1",), ("cnot(q0->q2)",)]

    def test_own_qubit_order_kept(self, make_schedule):
        """Gates on the same qubit keep circuit order across a disjoint CNOT."""
        s = make_schedule("qubits 3\nCNOT q0 q1\nT q2\nS q2\n")
        assert _described(s) == [
            ("cnot(q0->q1)", "inject Z_{pi/8}@q2"),
            ("inject Z_{pi/4}@q2",),
        ]

    def test_one_trn_serializes_disjoint_cnots(self, make_schedule):
        """With one TRN tile, disjoint CNOTs take separate steps."""
        s = make_schedule("qubits 4\nCNOT q0 q1\nCNOT q2 q3\n")
        assert s.metrics["timesteps"] == 2

    def test_two_trns_run_cnots_together(self, make_schedule):
        """A second TRN tile lets disjoint CNOTs share a step."""
        s = make_schedule("qubits 4\nCNOT q0 q1\nCNOT q2 q3\n", trn_count=2)
        assert s.metrics == {"tiles_used": 6, "timesteps": 1}
        assert {a.trn for a in s.steps[0].actions} == {"trn0", "trn1"}
        assert s.steps[0].resets == ["trn0", "trn1"]

    def test_no_trn_with_cnot_raises(self, make_schedule):
        """Two-qubit gates need a TRN tile."""
        with pytest.raises(NoTrnError, match="trn_count is 0"):
            make_schedule(trn_count=0)

    def test_no_trn_single_qubit_only(self, make_schedule):
        """Circuits without two-qubit gates compile without TRN tiles."""
        s = make_schedule("qubits 2\nT q0\nX q1\n", trn_count=0)
        assert s.trn_tiles() == []
        assert s.grid == (1, 2)
        assert s.metrics == {"tiles_used": 2, "timesteps": 1}

    def test_explicit_grid_too_small(self, make_schedule):
        """A grid without room for every tile raises InsufficientGridError."""
        with pytest.raises(InsufficientGridError, match="cannot hold 2 qubit tiles"):
            make_schedule(grid="1x2")

    def test_explicit_grid_used(self, make_schedule):
        """An explicit grid lays qubits row-major left of the TRN column."""
        s = make_schedule(grid="2x3")
        assert s.grid == (2, 3)
        assert s.tiles["q1"].slot == (0, 1)
        assert s.tiles["trn0"].slot == (0, 2)

    def test_empty_circuit(self, make_schedule):
        """No gates means no steps."""
        s = make_schedule("qubits 1\n")
        assert s.steps == []
        assert s.metrics == {"tiles_used": 2, "timesteps": 0}


class TestLowering:
    """Tests for lower_gate."""

    def test_paulis_pass_through(self):
        """X and Z become logical Paulis."""
        (action,) = lower_gate(GateIR(GateKind.X, (2,)))
        assert action.kind is ActionKind.LOGICAL_PAULI
        assert action.pauli == "X_L"

    def test_y_is_half_turn(self):
        """Y is injected as a Y_{pi/2} rotation."""
        (action,) = lower_gate(GateIR(GateKind.Y, (0,)))
        assert action.describe() == "inject Y_{pi/2}@q0"

    def test_cpp_zx_is_cnot(self):
        """C(Z, X) is a CNOT in the given order."""
        (action,) = lower_gate(GateIR(GateKind.CPP, (0, 1), paulis=("Z", "X")))
        assert action.kind is ActionKind.CNOT
        assert action.qubits == (0, 1)

    def test_cpp_xz_is_reversed_cnot(self):
        """C(X, Z) is a CNOT from the second operand to the first."""
        (action,) = lower_gate(GateIR(GateKind.CPP, (0, 1), paulis=("X", "Z")))
        assert action.kind is ActionKind.CNOT
        assert action.qubits == (1, 0)

    def test_cpp_xx_wraps_cz_in_basis_changes(self):
        """C(X, X) conjugates a CZ with H on both qubits."""
        actions = lower_gate(GateIR(GateKind.CPP, (0, 1), paulis=("X", "X")))
        kinds = [a.kind for a in actions]
        assert kinds.count(ActionKind.CZ) == 1
        assert len(actions) == 13
        assert kinds.index(ActionKind.CZ) == 6

    def test_cpp_zy_basis_change(self):
        """A Y operand maps through S and H around the CZ."""
        actions = lower_gate(GateIR(GateKind.CPP, (0, 1), paulis=("Z", "Y")))
        labels = [a.describe() for a in actions]
        assert labels[0] == "inject Z_{-pi/4}@q1"
        assert "cz(q0,q1)" in labels
        assert labels[-1] == "inject Z_{pi/4}@q1"


class TestHelpers:
    """Tests for grid parsing, formatting and decomposition."""

    def test_parse_grid(self):
        """ROWSxCOLS parses case-insensitively."""
        assert parse_grid("2X5") == (2, 5)

    @pytest.mark.parametrize("text", ["2", "ax3", "2x3x4", ""])
    def test_parse_grid_malformed(self, text):
        """Malformed grids raise ValueError."""
        with pytest.raises(ValueError, match="ROWSxCOLS"):
            parse_grid(text)

    def test_config_validation(self):
        """Distance below 2 is refused."""
        with pytest.raises(ValueError, match="distance"):
            ScheduleConfig(distance=1)

    def test_format_gate(self):
        """format_gate writes parseable circuit lines."""
        assert format_gate(GateIR(GateKind.RZ, (1,), angle=0.25)) == "RZ(0.25) q1"
        assert format_gate(GateIR(GateKind.CPP, (0, 2), paulis=("X", "Z"))) == "CPP XZ q0 q2"
        assert format_gate(GateIR(GateKind.CNOT, (2, 0))) == "CNOT q2 q0"

    def test_decompose_circuit(self):
        """Every gate contributes its rotation terms in order."""
        terms = decompose_circuit(parse_circuit("qubits 2\nH q0\nT q1\nCNOT q0 q1\n"))
        assert len(terms) == 7
        assert terms[3].label() == "Z_{pi/8}@q1"
        assert terms[4].pauli.n == 2
