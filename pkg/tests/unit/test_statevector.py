"""Unit tests for the dense reference oracle."""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.models.dense_state import DenseState, DenseUnitary
from src.models.gate import GateIR, GateKind, RotationTerm
from src.models.pauli_string import PauliString
from src.services.statevector import (
    DimensionMismatchError,
    UnsupportedGateMatrixError,
    apply_to_state,
    controlled_pauli_matrix,
    equal_up_to_global_phase,
    fidelity,
    gate_matrix,
    local_gate_matrix,
    pauli_to_matrix,
    rotation_matrix,
)

_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)


class TestMatrices:
    """Tests for Pauli, gate and rotation matrices."""

    def test_pauli_matrix_includes_phase(self):
        """-iXZ carries its phase factor."""
        mat = pauli_to_matrix(PauliString.from_label("-iXZ"))
        x = np.array([[0, 1], [1, 0]])
        z = np.diag([1, -1])
        assert np.allclose(mat, -1j * np.kron(x, z))

    def test_controlled_z_x_is_cnot(self):
        """C(Z, X) is the textbook CNOT."""
        assert np.allclose(controlled_pauli_matrix("Z", "X"), _CNOT)

    def test_local_matrix_control_first(self):
        """local_gate_matrix ignores operand indices."""
        assert np.allclose(local_gate_matrix(GateIR(GateKind.CNOT, (5, 2))), _CNOT)

    def test_reversed_cnot_embedding(self):
        """CNOT with control q1 swaps |01> and |11>."""
        u = gate_matrix(GateIR(GateKind.CNOT, (1, 0)))
        assert u.n == 2
        assert u.matrix[3, 1] == 1
        assert u.matrix[1, 3] == 1
        assert u.matrix[0, 0] == 1

    def test_gate_matrix_size_cap(self):
        """Registers beyond 10 qubits are refused."""
        with pytest.raises(UnsupportedGateMatrixError, match="at most 10"):
            gate_matrix(GateIR(GateKind.H, (10,)))

    def test_half_turn_rotation(self):
        """Z_{pi/2} is -iZ."""
        u = rotation_matrix(RotationTerm.dyadic("Z", Fraction(1, 2), (0,)))
        assert np.allclose(u.matrix, -1j * np.diag([1, -1]))

    def test_rz_matches_rotation(self):
        """RZ(theta) equals exp(-i theta/2 Z)."""
        theta = 0.9
        expected = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
        assert np.allclose(local_gate_matrix(GateIR(GateKind.RZ, (0,), angle=theta)), expected)


class TestGlobalPhase:
    """Tests for equal_up_to_global_phase."""

    def test_phase_multiple_is_equal(self):
        """S and iS agree up to phase."""
        s = gate_matrix(GateIR(GateKind.S, (0,)))
        assert equal_up_to_global_phase(DenseUnitary(1, 1j * s.matrix), s)

    def test_different_gates_differ(self):
        """S and Z differ."""
        s = gate_matrix(GateIR(GateKind.S, (0,)))
        z = gate_matrix(GateIR(GateKind.Z, (0,)))
        assert not equal_up_to_global_phase(s, z)

    def test_dimension_mismatch_raises(self):
        """Unitaries on different registers raise DimensionMismatchError."""
        h1 = gate_matrix(GateIR(GateKind.H, (0,)))
        h2 = gate_matrix(GateIR(GateKind.H, (1,)))
        with pytest.raises(DimensionMismatchError):
            equal_up_to_global_phase(h1, h2)


class TestStates:
    """Tests for apply_to_state and fidelity."""

    def test_hadamard_makes_plus(self):
        """H|0> = |+>."""
        h = DenseUnitary(1, local_gate_matrix(GateIR(GateKind.H, (0,))))
        state = apply_to_state(DenseState.basis(1), h, [0])
        assert np.allclose(state.amplitudes, [1 / math.sqrt(2)] * 2)

    def test_bell_state(self):
        """H then CNOT makes (|00> + |11>)/sqrt(2)."""
        h = DenseUnitary(1, local_gate_matrix(GateIR(GateKind.H, (0,))))
        state = apply_to_state(DenseState.basis(2), h, [0])
        state = apply_to_state(state, DenseUnitary(2, _CNOT), [0, 1])
        bell = DenseState.from_vector(np.array([1, 0, 0, 1]))
        assert fidelity(state, bell) == pytest.approx(1.0)

    def test_fidelity_of_zero_and_plus(self):
        """|<0|+>|^2 = 1/2."""
        plus = DenseState.from_vector(np.array([1, 1]))
        assert fidelity(DenseState.basis(1), plus) == pytest.approx(0.5)

    def test_width_mismatch_raises(self):
        """A two-qubit unitary on one qubit raises DimensionMismatchError."""
        with pytest.raises(DimensionMismatchError, match="applied to 1 qubits"):
            apply_to_state(DenseState.basis(2), DenseUnitary(2, _CNOT), [0])

    def test_out_of_range_raises(self):
        """Operands beyond the register raise DimensionMismatchError."""
        h = DenseUnitary(1, local_gate_matrix(GateIR(GateKind.H, (0,))))
        with pytest.raises(DimensionMismatchError, match="out of range"):
            apply_to_state(DenseState.basis(1), h, [1])
