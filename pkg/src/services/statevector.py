"""Dense reference oracle: gate and rotation matrices, state updates, fidelity.

Used to validate decompositions, injections and compiled schedules on small
registers. Qubit 0 is the most significant bit of a basis index.
"""

import math
from collections.abc import Sequence

import numpy as np

from src.models.dense_state import DenseState, DenseUnitary
from src.models.gate import GateIR, GateKind, RotationTerm
from src.models.pauli_string import PauliString

MAX_GATE_QUBITS = 10

_I2 = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
_S = np.diag([1, 1j]).astype(np.complex128)
_T = np.diag([1, np.exp(1j * math.pi / 4)]).astype(np.complex128)
LETTER_MATRICES = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


class StatevectorError(Exception):
    """Base exception for dense oracle errors."""


class DimensionMismatchError(StatevectorError):
    """Raised when operands act on different numbers of qubits."""


class UnsupportedGateMatrixError(StatevectorError):
    """Raised for gate kinds without a canonical matrix or too many qubits."""


def pauli_to_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix of a Pauli string including its phase."""
    mat = np.array([[1.0 + 0j]])
    for q in range(p.n):
        mat = np.kron(mat, LETTER_MATRICES[p.letter(q)])
    return (1j**p.phase) * mat


def controlled_pauli_matrix(p1: str, p2: str) -> np.ndarray:
    """C(P1, P2): apply P2 to the second qubit when the first is in P1's -1 eigenspace."""
    a = LETTER_MATRICES[p1]
    b = LETTER_MATRICES[p2]
    plus = (_I2 + a) / 2
    minus = (_I2 - a) / 2
    return np.kron(plus, _I2) + np.kron(minus, b)


def _apply_local(tensor: np.ndarray, local: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Contract a k-qubit operator into the leading qubit axes of tensor."""
    k = len(qubits)
    op = local.reshape((2,) * (2 * k))
    out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(out, list(range(k)), list(qubits))


def embed(local: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Embed a k-qubit matrix acting on ``qubits`` into an n-qubit matrix."""
    dim = 2**n
    ident = np.eye(dim, dtype=np.complex128).reshape((2,) * n + (dim,))
    return _apply_local(ident, local, qubits).reshape(dim, dim)


def local_gate_matrix(g: GateIR) -> np.ndarray:
    """Matrix of a gate on its own operands, control first."""
    simple = {
        GateKind.X: _X,
        GateKind.Y: _Y,
        GateKind.Z: _Z,
        GateKind.H: _H,
        GateKind.S: _S,
        GateKind.T: _T,
    }
    if g.kind in simple:
        return simple[g.kind]
    if g.kind.is_rotation:
        letter = g.kind.value[1]
        half = float(g.angle) / 2
        return math.cos(half) * _I2 - 1j * math.sin(half) * LETTER_MATRICES[letter]
    if g.kind is GateKind.CNOT:
        return controlled_pauli_matrix("Z", "X")
    if g.kind is GateKind.CZ:
        return controlled_pauli_matrix("Z", "Z")
    if g.kind is GateKind.CPP and g.paulis is not None:
        return controlled_pauli_matrix(*g.paulis)
    raise UnsupportedGateMatrixError(f"No canonical matrix for gate kind {g.kind.value}")


def gate_matrix(g: GateIR, n: int | None = None) -> DenseUnitary:
    """Canonical matrix of a gate embedded on its qubit indices.

    Args:
        g: Gate to convert
        n: Total qubit count; defaults to the largest operand index plus one

    Returns:
        DenseUnitary on n qubits

    Raises:
        UnsupportedGateMatrixError: If the register exceeds 10 qubits
    """
    total = max(g.qubits) + 1 if n is None else n
    if total > MAX_GATE_QUBITS:
        raise UnsupportedGateMatrixError(
            f"gate_matrix supports at most {MAX_GATE_QUBITS} qubits, got {total}"
        )
    return DenseUnitary(total, embed(local_gate_matrix(g), g.qubits, total))


def rotation_matrix(r: RotationTerm) -> DenseUnitary:
    """``cos(phi) I - i sin(phi) P`` on the rotation's own qubits."""
    if r.pauli.n > MAX_GATE_QUBITS:
        raise UnsupportedGateMatrixError(
            f"rotation_matrix supports at most {MAX_GATE_QUBITS} qubits, got {r.pauli.n}"
        )
    p = pauli_to_matrix(r.pauli)
    mat = math.cos(r.angle) * np.eye(p.shape[0]) - 1j * math.sin(r.angle) * p
    return DenseUnitary(r.pauli.n, mat)


def rotation_product(terms: Sequence[RotationTerm], n: int) -> DenseUnitary:
    """Unitary of a term list applied in order (first term acts first).

    Term qubits index into an n-qubit register.
    """
    total = np.eye(2**n, dtype=np.complex128)
    for term in terms:
        local = rotation_matrix(term).matrix
        total = embed(local, term.qubits, n) @ total
    return DenseUnitary(n, total)


def equal_up_to_global_phase(u: DenseUnitary, v: DenseUnitary, tol: float = 1e-10) -> bool:
    """Whether ``u == c * v`` for some unit complex c.

    The phase c is read off v's largest-magnitude entry.

    Raises:
        DimensionMismatchError: If u and v act on different registers
    """
    if u.n != v.n:
        raise DimensionMismatchError(f"cannot compare {u.n}-qubit and {v.n}-qubit unitaries")
    flat = int(np.argmax(np.abs(v.matrix)))
    ref = v.matrix.flat[flat]
    c = u.matrix.flat[flat] / ref
    if abs(abs(c) - 1.0) > tol:
        return False
    return bool(np.max(np.abs(u.matrix - c * v.matrix)) <= tol)


def apply_to_state(s: DenseState, u: DenseUnitary, qubits: Sequence[int]) -> DenseState:
    """Apply u to the listed qubits of s.

    Raises:
        DimensionMismatchError: If u's width differs from len(qubits) or an index is out of range
    """
    if u.n != len(qubits):
        raise DimensionMismatchError(f"{u.n}-qubit unitary applied to {len(qubits)} qubits")
    if any(not 0 <= q < s.n for q in qubits):
        raise DimensionMismatchError(f"qubits {list(qubits)} out of range for n={s.n}")
    tensor = s.amplitudes.reshape((2,) * s.n)
    out = _apply_local(tensor, u.matrix, qubits).reshape(-1)
    # Renormalize away floating drift accumulated over long products.
    return DenseState(s.n, out / np.linalg.norm(out))


def fidelity(a: DenseState, b: DenseState) -> float:
    """``|<a|b>|**2`` clipped into [0, 1]."""
    if a.n != b.n:
        raise DimensionMismatchError(f"cannot compare {a.n}-qubit and {b.n}-qubit states")
    overlap = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return float(min(1.0, max(0.0, overlap)))
