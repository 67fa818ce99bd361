"""Stabilizer tableau simulator for the physical-qubit grid.

Rows ``0..n-1`` hold destabilizers and rows ``n..2n-1`` stabilizers. Each row
stores X/Z bit vectors and a sign bit; Y is the Hermitian letter, so the
row operator is ``(-1)**r * L_0 ⊗ ... ⊗ L_{n-1}``.
"""

from collections.abc import Iterable, Sequence

import numpy as np

from src.models.measurement import Basis, MeasurementOutcome
from src.models.pauli_string import PauliString, phase_increment
from src.services.simulator import (
    CLIFFORD_GATES,
    IdentityMeasurementError,
    OutcomeStream,
    QubitIndexError,
    SimulatorError,
    UnknownGateError,
    check_pauli,
    check_qubits,
)
from src.utils.gf2 import gf2_rank
from src.utils.logging import get_logger

logger = get_logger(__name__)


class TableauInvariantError(SimulatorError):
    """Raised when the generator invariants are violated."""


class Tableau:
    """Clifford state on n qubits with seeded Pauli-product measurement."""

    def __init__(
        self,
        n: int,
        initial: Sequence[Basis] | Basis = Basis.ZERO,
        seed: int | None = 0,
    ) -> None:
        """Prepare a product state.

        Args:
            n: Qubit count (>= 1)
            initial: One basis for all qubits, or one per qubit
            seed: Seed for the random-outcome stream

        Raises:
            QubitIndexError: If n < 1 or the basis list has the wrong length
        """
        if n < 1:
            raise QubitIndexError(f"Tableau needs at least one qubit, got n={n}")
        bases = [initial] * n if isinstance(initial, Basis) else list(initial)
        if len(bases) != n:
            raise QubitIndexError(f"expected {n} initial bases, got {len(bases)}")

        self.n = n
        self.rng_seed = seed
        self._stream = OutcomeStream(seed)
        self.x = np.zeros((2 * n, n), dtype=bool)
        self.z = np.zeros((2 * n, n), dtype=bool)
        self.r = np.zeros(2 * n, dtype=bool)
        for q, basis in enumerate(bases):
            if basis is Basis.ZERO:
                self.x[q, q] = True
                self.z[n + q, q] = True
            else:
                self.z[q, q] = True
                self.x[n + q, q] = True

    # --- row helpers ---

    def _row(self, i: int) -> PauliString:
        return PauliString(self.x[i], self.z[i], 2 if self.r[i] else 0)

    def _anticommuting_rows(self, p: PauliString) -> np.ndarray:
        overlap = (self.x & p.z) ^ (self.z & p.x)
        return np.count_nonzero(overlap, axis=1) % 2 == 1

    def _rowsum(self, h: int, i: int) -> None:
        """Row h becomes row i times row h."""
        k = 2 * int(self.r[h]) + 2 * int(self.r[i])
        k += phase_increment(self.x[i], self.z[i], self.x[h], self.z[h])
        self.r[h] = (k % 4) == 2  # noqa: PLR2004
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def stabilizers(self) -> list[PauliString]:
        return [self._row(self.n + i) for i in range(self.n)]

    def destabilizers(self) -> list[PauliString]:
        return [self._row(i) for i in range(self.n)]

    # --- gates ---

    def h(self, a: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()

    def s(self, a: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]

    def cnot(self, a: int, b: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, b] & ~(self.x[:, b] ^ self.z[:, a])
        self.x[:, b] ^= self.x[:, a]
        self.z[:, a] ^= self.z[:, b]

    def cz(self, a: int, b: int) -> None:
        self.h(b)
        self.cnot(a, b)
        self.h(b)

    def pauli_x(self, a: int) -> None:
        self.r ^= self.z[:, a]

    def pauli_z(self, a: int) -> None:
        self.r ^= self.x[:, a]

    def pauli_y(self, a: int) -> None:
        self.r ^= self.x[:, a] ^ self.z[:, a]

    def swap(self, a: int, b: int) -> None:
        self.x[:, [a, b]] = self.x[:, [b, a]]
        self.z[:, [a, b]] = self.z[:, [b, a]]

    def apply_gate(self, name: str, qubits: Sequence[int]) -> None:
        """Apply a named Clifford gate.

        Raises:
            UnknownGateError: For names outside H, S, CNOT, CZ, X, Y, Z, SWAP
            QubitIndexError: For repeated or out-of-range qubits
        """
        gate = name.upper()
        if gate not in CLIFFORD_GATES:
            raise UnknownGateError(f"Tableau cannot apply gate {name!r}")
        qubits = list(qubits)
        check_qubits(qubits, self.n)
        arity = 2 if gate in ("CNOT", "CZ", "SWAP") else 1
        if len(qubits) != arity:
            raise QubitIndexError(f"{gate} takes {arity} qubit(s), got {len(qubits)}")
        dispatch = {
            "H": self.h,
            "S": self.s,
            "X": self.pauli_x,
            "Y": self.pauli_y,
            "Z": self.pauli_z,
            "CNOT": self.cnot,
            "CZ": self.cz,
            "SWAP": self.swap,
        }
        dispatch[gate](*qubits)

    def apply_pauli(self, p: PauliString) -> None:
        """Conjugate every generator by a Pauli (global phase ignored)."""
        if p.n != self.n:
            raise QubitIndexError(f"Pauli acts on {p.n} qubits, tableau has {self.n}")
        self.r ^= self._anticommuting_rows(p)

    # --- measurement ---

    def force_outcomes(self, values: Iterable[int]) -> None:
        """Queue outcomes for upcoming random measurements, in order."""
        self._stream.force(values)

    def _deterministic_value(self, p: PauliString) -> int:
        """Eigenvalue of p when it commutes with every stabilizer."""
        n = self.n
        hits = np.nonzero(self._anticommuting_rows(p)[:n])[0]
        acc_x = np.zeros(n, dtype=bool)
        acc_z = np.zeros(n, dtype=bool)
        k = 0
        for i in hits:
            row = n + int(i)
            k += 2 * int(self.r[row]) + phase_increment(self.x[row], self.z[row], acc_x, acc_z)
            acc_x ^= self.x[row]
            acc_z ^= self.z[row]
        if not (np.array_equal(acc_x, p.x) and np.array_equal(acc_z, p.z)):
            raise TableauInvariantError(f"{p.to_label()} is not generated by the stabilizers")
        group_sign = 1 if k % 4 == 0 else -1
        return group_sign * p.sign

    def measure_pauli(self, p: PauliString) -> MeasurementOutcome:
        """Measure a Hermitian Pauli product.

        Raises:
            IdentityMeasurementError: If p is the identity
        """
        check_pauli(p, self.n)
        if p.is_identity():
            raise IdentityMeasurementError("cannot measure the identity")
        n = self.n
        anti = self._anticommuting_rows(p)
        stab_hits = np.nonzero(anti[n:])[0]
        if stab_hits.size == 0:
            return MeasurementOutcome(self._deterministic_value(p), True, p)

        pivot = n + int(stab_hits[0])
        for i in np.nonzero(anti)[0]:
            if int(i) != pivot:
                self._rowsum(int(i), pivot)
        dest = pivot - n
        self.x[dest] = self.x[pivot]
        self.z[dest] = self.z[pivot]
        self.r[dest] = self.r[pivot]

        value = self._stream.next_value()
        self.x[pivot] = p.x
        self.z[pivot] = p.z
        self.r[pivot] = (value * p.sign) == -1
        return MeasurementOutcome(value, False, p)

    def reset_qubits(self, qubits: Iterable[int], basis: Basis = Basis.ZERO) -> None:
        """Measure each qubit in the basis and flip it onto the +1 eigenstate."""
        qubits = list(qubits)
        check_qubits(qubits, self.n)
        for q in qubits:
            outcome = self.measure_pauli(PauliString.from_sparse(self.n, {q: basis.letter}))
            if outcome.value == -1:
                if basis is Basis.ZERO:
                    self.pauli_x(q)
                else:
                    self.pauli_z(q)

    def contains_stabilizer(self, p: PauliString) -> int | None:
        """+1 if p stabilizes the state, -1 if -p does, None otherwise."""
        check_pauli(p, self.n)
        if p.is_identity():
            return p.sign
        if np.any(self._anticommuting_rows(p)[self.n :]):
            return None
        return self._deterministic_value(p)

    def expectation(self, p: PauliString) -> float:
        value = self.contains_stabilizer(p)
        return 0.0 if value is None else float(value)

    def copy(self) -> "Tableau":
        clone = Tableau.__new__(Tableau)
        clone.n = self.n
        clone.rng_seed = self.rng_seed
        clone._stream = self._stream.copy()
        clone.x = self.x.copy()
        clone.z = self.z.copy()
        clone.r = self.r.copy()
        return clone

    def check_invariants(self) -> None:
        """Verify commutation, conjugacy and full rank of the generators.

        Raises:
            TableauInvariantError: On the first violated property
        """
        n = self.n
        # Symplectic form between all rows: entry (i, j) is 1 when rows anticommute.
        xi = self.x.astype(np.uint8)
        zi = self.z.astype(np.uint8)
        form = (xi @ zi.T + zi @ xi.T) % 2
        stab = form[n:, n:]
        if np.any(stab):
            raise TableauInvariantError("stabilizer generators do not pairwise commute")
        cross = form[:n, n:]
        if not np.array_equal(cross, np.eye(n, dtype=cross.dtype)):
            raise TableauInvariantError("destabilizers are not conjugate to stabilizers")
        if gf2_rank(np.concatenate([xi[n:], zi[n:]], axis=1)) != n:
            raise TableauInvariantError("stabilizer generators are not independent")
