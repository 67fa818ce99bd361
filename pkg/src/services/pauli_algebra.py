"""Pauli-group algebra and the gate-to-rotation decomposition table.

Rotations follow ``P_phi = exp(-i * phi * P)``. Under that convention the
half-turn forms often listed for the Pauli gates (X_pi, Y_pi, and Y_pi for Z)
are -I, so the table below uses pi/2 for them and logs the discrepancy once.
"""

from fractions import Fraction

from src.models.gate import GateIR, GateKind, RotationTerm
from src.models.pauli_string import PauliString
from src.services.statevector import equal_up_to_global_phase, gate_matrix, rotation_product
from src.utils.logging import get_logger

logger = get_logger(__name__)

QUARTER = Fraction(1, 4)
EIGHTH = Fraction(1, 8)
HALF = Fraction(1, 2)

# Pauli gates: commonly listed form -> form used.
SINGLE_PAULI_DISCREPANCIES = {
    GateKind.X: ("X_pi", "X_{pi/2}"),
    GateKind.Y: ("Y_pi", "Y_{pi/2}"),
    GateKind.Z: ("Y_pi", "Z_{pi/2}"),
}

_discrepancy_logged: set[GateKind] = set()


class PauliError(Exception):
    """Base exception for Pauli algebra errors."""


class PauliDimensionError(PauliError):
    """Raised when operands act on different qubit counts."""


class UnsupportedGateError(PauliError):
    """Raised when a gate has no rotation decomposition."""


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Phase-exact product ``a * b``.

    Raises:
        PauliDimensionError: If a and b act on different qubit counts
    """
    if a.n != b.n:
        raise PauliDimensionError(f"cannot multiply {a.n}-qubit and {b.n}-qubit Pauli strings")
    return a * b


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic product of a and b vanishes.

    Raises:
        PauliDimensionError: If a and b act on different qubit counts
    """
    if a.n != b.n:
        raise PauliDimensionError(f"cannot compare {a.n}-qubit and {b.n}-qubit Pauli strings")
    return a.commutes_with(b)


def _controlled_pauli_terms(p1: str, p2: str, qubits: tuple[int, int]) -> list[RotationTerm]:
    """C(P1, P2) terms: listed operand placement first, else the transposed one."""
    listed = [
        RotationTerm.dyadic(p1 + p2, QUARTER, qubits),
        RotationTerm.dyadic("I" + p1, -QUARTER, qubits),
        RotationTerm.dyadic(p2 + "I", -QUARTER, qubits),
    ]
    transposed = [
        listed[0],
        RotationTerm.dyadic("I" + p2, -QUARTER, qubits),
        RotationTerm.dyadic(p1 + "I", -QUARTER, qubits),
    ]
    target = gate_matrix(GateIR(GateKind.CPP, (0, 1), paulis=(p1, p2)))
    local = (0, 1)
    for name, terms in (("listed", listed), ("transposed", transposed)):
        relabeled = [RotationTerm(t.pauli, t.angle, local, t.pi_fraction) for t in terms]
        if equal_up_to_global_phase(rotation_product(relabeled, 2), target):
            if name == "transposed":
                logger.debug("C(%s,%s): listed operand placement fails; using transposed", p1, p2)
            return terms
    raise UnsupportedGateError(f"no oracle-consistent decomposition for C({p1},{p2})")


def decompose_gate(g: GateIR) -> list[RotationTerm]:
    """Pauli-rotation form of a gate, in application order.

    Args:
        g: Well-formed gate

    Returns:
        Rotation terms whose ordered product equals the gate up to global phase

    Raises:
        UnsupportedGateError: If the gate kind has no decomposition
    """
    q = g.qubits
    kind = g.kind

    if kind in SINGLE_PAULI_DISCREPANCIES:
        if kind not in _discrepancy_logged:
            listed, used = SINGLE_PAULI_DISCREPANCIES[kind]
            logger.warning("Listed form %s for %s equals -I; using %s", listed, kind.value, used)
            _discrepancy_logged.add(kind)
        return [RotationTerm.dyadic(kind.value, HALF, q)]
    if kind.is_rotation:
        return [RotationTerm.about(kind.value[1], float(g.angle) / 2, q)]
    if kind is GateKind.S:
        return [RotationTerm.dyadic("Z", QUARTER, q)]
    if kind is GateKind.T:
        return [RotationTerm.dyadic("Z", EIGHTH, q)]
    if kind is GateKind.H:
        return [
            RotationTerm.dyadic("Z", QUARTER, q),
            RotationTerm.dyadic("X", QUARTER, q),
            RotationTerm.dyadic("Z", QUARTER, q),
        ]
    if kind is GateKind.CNOT:
        return [
            RotationTerm.dyadic("ZX", QUARTER, q),
            RotationTerm.dyadic("IX", -QUARTER, q),
            RotationTerm.dyadic("ZI", -QUARTER, q),
        ]
    if kind is GateKind.CZ:
        return _controlled_pauli_terms("Z", "Z", (q[0], q[1]))
    if kind is GateKind.CPP and g.paulis is not None:
        return _controlled_pauli_terms(g.paulis[0], g.paulis[1], (q[0], q[1]))
    raise UnsupportedGateError(f"gate kind {kind.value} has no rotation decomposition")
