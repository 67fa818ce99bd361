"""Dense state vector and unitary value types for the reference simulator."""

from dataclasses import dataclass

import numpy as np

MAX_DENSE_QUBITS = 20
NORM_TOLERANCE = 1e-12
UNITARY_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class DenseState:
    """Normalized state vector; qubit 0 is the most significant index bit.

    Attributes:
        n: Qubit count (1 <= n <= 20)
        amplitudes: Complex vector of length 2**n
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        """Validate size cap, shape and norm."""
        if not 1 <= self.n <= MAX_DENSE_QUBITS:
            raise ValueError(f"DenseState supports 1..{MAX_DENSE_QUBITS} qubits, got {self.n}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != 2**self.n:
            raise ValueError(f"expected {2**self.n} amplitudes, got {amps.size}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"state is not normalized (norm={norm:.15f})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "DenseState":
        amps = np.zeros(2**n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n, amps)

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "DenseState":
        """Normalize an arbitrary nonzero vector of length 2**n."""
        vec = np.asarray(vector, dtype=np.complex128).reshape(-1)
        n = int(vec.size).bit_length() - 1
        if 2**n != vec.size:
            raise ValueError(f"vector length {vec.size} is not a power of two")
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(n, vec / norm)


@dataclass(frozen=True, eq=False)
class DenseUnitary:
    """Unitary matrix on n qubits, same index convention as DenseState."""

    n: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        """Validate shape and unitarity."""
        mat = np.asarray(self.matrix, dtype=np.complex128)
        dim = 2**self.n
        if mat.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got shape {mat.shape}")
        defect = np.max(np.abs(mat.conj().T @ mat - np.eye(dim)))
        if defect > UNITARY_TOLERANCE:
            raise ValueError(f"matrix is not unitary (max |U^dag U - I| = {defect:.3e})")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return 2**self.n

    def __matmul__(self, other: "DenseUnitary") -> "DenseUnitary":
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n} qubits")
        return DenseUnitary(self.n, self.matrix @ other.matrix)
