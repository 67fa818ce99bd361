"""PauliString entity: an n-qubit Pauli product with an exact phase."""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

_PREFIXES = {"+": 0, "+i": 1, "-": 2, "-i": 3, "": 0, "i": 1}
_PREFIX_OUT = ("+", "+i", "-", "-i")
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}


def phase_increment(x1: np.ndarray, z1: np.ndarray, x2: np.ndarray, z2: np.ndarray) -> int:
    """Power of i picked up when multiplying letters, summed over qubits."""
    x1 = x1.astype(np.int64)
    z1 = z1.astype(np.int64)
    x2 = x2.astype(np.int64)
    z2 = z2.astype(np.int64)
    g = np.where(
        (x1 == 1) & (z1 == 1),
        z2 - x2,
        np.where(
            x1 == 1,
            z2 * (2 * x2 - 1),
            np.where(z1 == 1, x2 * (1 - 2 * z2), 0),
        ),
    )
    return int(g.sum())


@dataclass(frozen=True, eq=False)
class PauliString:
    """Pauli product ``i**phase * L_0 ⊗ ... ⊗ L_{n-1}``.

    Letters decode per qubit from (x, z): (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y,
    with Y the Hermitian Pauli. Qubit 0 is the leftmost label character.

    Attributes:
        x: Per-qubit X-component flags
        z: Per-qubit Z-component flags
        phase: Exponent k of the global factor i**k, k in {0, 1, 2, 3}
    """

    x: np.ndarray
    z: np.ndarray
    phase: int = 0

    def __post_init__(self) -> None:
        """Normalize arrays to read-only booleans and validate shapes."""
        x = np.array(self.x, dtype=bool).reshape(-1)
        z = np.array(self.z, dtype=bool).reshape(-1)
        if x.shape != z.shape:
            raise ValueError(f"x and z must have equal length, got {x.size} and {z.size}")
        if x.size == 0:
            raise ValueError("PauliString must act on at least one qubit")
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    # --- construction ---

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        """Identity on n qubits."""
        return cls(np.zeros(n, dtype=bool), np.zeros(n, dtype=bool))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a label such as ``"+XZI"``, ``"-iY"`` or ``"ZZ"``.

        Raises:
            ValueError: On unknown letters or an empty body
        """
        body = label.lstrip("+-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in _PREFIXES:
            raise ValueError(f"Invalid phase prefix in Pauli label: {label!r}")
        try:
            bits = [_LETTER_BITS[ch] for ch in body.upper()]
        except KeyError as e:
            raise ValueError(f"Invalid letter {e.args[0]!r} in Pauli label: {label!r}") from e
        if not bits:
            raise ValueError(f"Pauli label has no qubits: {label!r}")
        x, z = zip(*bits, strict=True)
        return cls(np.array(x, dtype=bool), np.array(z, dtype=bool), _PREFIXES[prefix])

    @classmethod
    def from_sparse(
        cls, n: int, letters: Mapping[int, str], phase: int = 0
    ) -> "PauliString":
        """Build from ``{qubit: letter}``; unlisted qubits carry I."""
        x = np.zeros(n, dtype=bool)
        z = np.zeros(n, dtype=bool)
        for qubit, letter in letters.items():
            if not 0 <= qubit < n:
                raise ValueError(f"Qubit index {qubit} out of range for n={n}")
            x[qubit], z[qubit] = _LETTER_BITS[letter.upper()]
        return cls(x, z, phase)

    @classmethod
    def on(cls, n: int, letter: str, qubits: Iterable[int], phase: int = 0) -> "PauliString":
        """The same letter on every listed qubit."""
        return cls.from_sparse(n, dict.fromkeys(qubits, letter), phase)

    # --- queries ---

    @property
    def n(self) -> int:
        return int(self.x.size)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian strings."""
        if not self.is_hermitian:
            raise ValueError(f"{self.to_label()} is not Hermitian and has no real sign")
        return 1 if self.phase == 0 else -1

    def letter(self, qubit: int) -> str:
        return _BITS_LETTER[(int(self.x[qubit]), int(self.z[qubit]))]

    def support(self) -> list[int]:
        return [int(q) for q in np.nonzero(self.x | self.z)[0]]

    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def is_identity(self) -> bool:
        return not bool(np.any(self.x | self.z))

    def to_label(self) -> str:
        letters = "".join(self.letter(q) for q in range(self.n))
        return _PREFIX_OUT[self.phase] + letters

    def symplectic(self) -> np.ndarray:
        """Concatenated ``[x | z]`` bit vector as uint8."""
        return np.concatenate([self.x, self.z]).astype(np.uint8)

    # --- algebra ---

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError(f"Cannot multiply Pauli strings on {self.n} and {other.n} qubits")
        k = self.phase + other.phase + phase_increment(self.x, self.z, other.x, other.z)
        return PauliString(self.x ^ other.x, self.z ^ other.z, k)

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise ValueError(f"Cannot compare Pauli strings on {self.n} and {other.n} qubits")
        overlap = np.count_nonzero((self.x & other.z) ^ (self.z & other.x))
        return overlap % 2 == 0

    def with_phase(self, phase: int) -> "PauliString":
        return PauliString(self.x, self.z, phase)

    def negate(self) -> "PauliString":
        return PauliString(self.x, self.z, self.phase + 2)

    def unsigned(self) -> "PauliString":
        return PauliString(self.x, self.z, 0)

    def same_letters(self, other: "PauliString") -> bool:
        return bool(np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.phase == other.phase and self.n == other.n and self.same_letters(other)

    def __hash__(self) -> int:
        return hash((self.phase, self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        return f"PauliString({self.to_label()!r})"
