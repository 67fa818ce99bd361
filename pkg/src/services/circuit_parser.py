"""Parser for the line-oriented circuit text format.

    # comment
    qubits 3
    H q0
    RZ(0.25) q1
    CNOT q0 q1
    CPP XZ q1 q2
"""

import re

from src.models.gate import CircuitIR, GateIR, GateKind
from src.utils.logging import get_logger

logger = get_logger(__name__)

_QUBIT = re.compile(r"q(\d+)$")
_ROTATION = re.compile(r"(RX|RY|RZ)\(\s*([^()]+?)\s*\)$")
_SINGLE = {"X", "Y", "Z", "H", "S", "T"}
_TWO = {"CNOT", "CZ"}


class CircuitParseError(Exception):
    """Raised for malformed circuit text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


def _tokens(text: str) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with 1-based start columns."""
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", text)]


def _qubit(token: str, col: int, line: int, n_qubits: int) -> int:
    match = _QUBIT.match(token)
    if match is None:
        raise CircuitParseError(f"expected a qubit like q0, got {token!r}", line, col)
    index = int(match.group(1))
    if index >= n_qubits:
        raise CircuitParseError(
            f"qubit q{index} out of range for {n_qubits} declared qubits", line, col
        )
    return index


def _expect_operands(tokens, count: int, name: str, line: int) -> None:
    if len(tokens) - 1 != count:
        col = tokens[count + 1][1] if len(tokens) > count + 1 else tokens[0][1]
        message = f"{name} takes {count} operand(s), got {len(tokens) - 1}"
        raise CircuitParseError(message, line, col)


def parse_circuit(text: str) -> CircuitIR:
    """Parse circuit text into a CircuitIR.

    Args:
        text: Circuit source

    Returns:
        The parsed circuit

    Raises:
        CircuitParseError: On syntax errors, unknown gates, bad or repeated operands
    """
    n_qubits: int | None = None
    gates: list[GateIR] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = _tokens(body)
        if not tokens:
            continue
        head, head_col = tokens[0]

        if head == "qubits":
            if n_qubits is not None:
                raise CircuitParseError("duplicate qubits declaration", line_no, head_col)
            if len(tokens) != 2 or not tokens[1][0].isdigit():  # noqa: PLR2004
                raise CircuitParseError("expected 'qubits <N>'", line_no, head_col)
            n_qubits = int(tokens[1][0])
            if n_qubits < 1:
                raise CircuitParseError("qubit count must be >= 1", line_no, tokens[1][1])
            continue
        if n_qubits is None:
            raise CircuitParseError("no qubits declaration before first gate", line_no, head_col)

        gates.append(_parse_gate(tokens, line_no, n_qubits))

    if n_qubits is None:
        raise CircuitParseError("no qubits declaration", 1, 1)
    logger.debug("Parsed circuit: %d qubits, %d gates", n_qubits, len(gates))
    return CircuitIR(n_qubits, gates)


def _parse_gate(tokens: list[tuple[str, int]], line: int, n_qubits: int) -> GateIR:
    head, head_col = tokens[0]
    rotation = _ROTATION.match(head)

    if rotation is not None:
        _expect_operands(tokens, 1, rotation.group(1), line)
        try:
            angle = float(rotation.group(2))
        except ValueError as e:
            raise CircuitParseError(
                f"bad angle {rotation.group(2)!r}", line, head_col + head.index("(") + 1
            ) from e
        q = _qubit(*tokens[1], line, n_qubits)
        return GateIR(GateKind(rotation.group(1)), (q,), angle=angle)

    if head in _SINGLE:
        _expect_operands(tokens, 1, head, line)
        return GateIR(GateKind(head), (_qubit(*tokens[1], line, n_qubits),))

    if head in _TWO or head == "CPP":
        paulis = None
        operands = tokens[1:]
        if head == "CPP":
            if not operands:
                raise CircuitParseError("CPP needs a Pauli pair such as XZ", line, head_col)
            pair, pair_col = operands[0]
            if len(pair) != 2 or not set(pair) <= set("XYZ"):  # noqa: PLR2004
                raise CircuitParseError(
                    f"expected a Pauli pair such as XZ, got {pair!r}", line, pair_col
                )
            paulis = (pair[0], pair[1])
            operands = operands[1:]
        if len(operands) != 2:  # noqa: PLR2004
            raise CircuitParseError(
                f"{head} takes 2 qubit operands, got {len(operands)}", line, head_col
            )
        a = _qubit(*operands[0], line, n_qubits)
        b = _qubit(*operands[1], line, n_qubits)
        if a == b:
            raise CircuitParseError(f"duplicate operand q{a}", line, operands[1][1])
        return GateIR(GateKind(head), (a, b), paulis=paulis)

    raise CircuitParseError(f"unknown gate {head!r}", line, head_col)
