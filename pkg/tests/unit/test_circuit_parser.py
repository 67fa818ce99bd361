"""Unit tests for the circuit text parser."""

import pytest

from src.models.gate import GateKind
from src.services.circuit_parser import CircuitParseError, parse_circuit

SAMPLE = """\
# sample
qubits 3
H q0
RZ(0.25) q1   # trailing comment
CNOT q0 q1

  CPP XZ q1 q2
"""


class TestParseCircuit:
    """Tests for well-formed circuits."""

    def test_sample(self):
        """Comments and blank lines are skipped; gates keep their order."""
        c = parse_circuit(SAMPLE)
        assert c.n_qubits == 3
        assert [g.kind for g in c.gates] == [
            GateKind.H,
            GateKind.RZ,
            GateKind.CNOT,
            GateKind.CPP,
        ]
        assert c.gates[1].angle == pytest.approx(0.25)
        assert c.gates[2].qubits == (0, 1)
        assert c.gates[3].paulis == ("X", "Z")

    def test_empty_circuit(self):
        """A declaration without gates is a valid circuit."""
        c = parse_circuit("qubits 4\n")
        assert c.n_qubits == 4
        assert c.gates == []

    def test_negative_rotation_angle(self):
        """Rotation angles may be negative."""
        c = parse_circuit("qubits 1\nRX(-1.5) q0\n")
        assert c.gates[0].angle == pytest.approx(-1.5)


class TestParseErrors:
    """Tests for error positions and messages."""

    @pytest.mark.parametrize(
        ("text", "line", "col", "message"),
        [
            ("qubits 2\nH q2\n", 2, 3, "out of range"),
            ("qubits 2\nFOO q0\n", 2, 1, "unknown gate 'FOO'"),
            ("H q0\n", 1, 1, "before first gate"),
            ("", 1, 1, "no qubits declaration"),
            ("qubits 2\nqubits 3\n", 2, 1, "duplicate qubits"),
            ("qubits 2\nCNOT q0 q0\n", 2, 9, "duplicate operand q0"),
            ("qubits 1\nRZ(abc) q0\n", 2, 4, "bad angle"),
            ("qubits 2\nH q0 q1\n", 2, 6, "takes 1 operand"),
            ("qubits 3\nCPP XQ q0 q1\n", 2, 5, "Pauli pair"),
            ("qubits 2\nCZ q0\n", 2, 1, "takes 2 qubit operands"),
            ("qubits x\n", 1, 1, "expected 'qubits <N>'"),
            ("qubits 0\n", 1, 8, ">= 1"),
            ("qubits 2\nH 0\n", 2, 3, "expected a qubit"),
        ],
    )
    def test_error_position(self, text, line, col, message):
        """Errors carry a 1-based line and column."""
        with pytest.raises(CircuitParseError, match=message) as exc_info:
            parse_circuit(text)
        assert (exc_info.value.line, exc_info.value.col) == (line, col)
        assert str(exc_info.value).startswith(f"line {line}, col {col}: ")
