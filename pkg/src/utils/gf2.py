"""Linear algebra over GF(2) on numpy uint8 arrays.

Stabilizer bookkeeping (generator independence, pure errors, sign inference)
reduces to row elimination over the binary field. Inputs are copied; callers'
arrays are never modified.
"""

import numpy as np


class GF2SingularError(ValueError):
    """Raised when a square matrix has no inverse over GF(2)."""


def _as_bits(a: np.ndarray) -> np.ndarray:
    return (np.asarray(a, dtype=np.uint8) % 2).copy()


def gf2_rank(a: np.ndarray) -> int:
    """Rank of a binary matrix.

    Args:
        a: 2-D array of 0/1 entries

    Returns:
        Number of linearly independent rows over GF(2)
    """
    m = _as_bits(a)
    if m.ndim != 2 or m.size == 0:
        return 0
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        pivots = np.nonzero(m[rank:, col])[0]
        if pivots.size == 0:
            continue
        piv = rank + int(pivots[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        hits = np.nonzero(m[:, col])[0]
        hits = hits[hits != rank]
        m[hits] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def gf2_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Solve ``a @ x = b`` over GF(2).

    Free variables are set to zero, so the returned solution is
    deterministic for a given system.

    Args:
        a: Coefficient matrix of shape (rows, cols)
        b: Right-hand side of length rows

    Returns:
        One solution of length cols, or None if the system is inconsistent
    """
    m = _as_bits(a)
    rhs = _as_bits(b).reshape(-1)
    rows, cols = m.shape
    if rhs.shape[0] != rows:
        raise ValueError(f"right-hand side has length {rhs.shape[0]}, expected {rows}")

    pivot_cols: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        pivots = np.nonzero(m[row:, col])[0]
        if pivots.size == 0:
            continue
        piv = row + int(pivots[0])
        if piv != row:
            m[[row, piv]] = m[[piv, row]]
            rhs[[row, piv]] = rhs[[piv, row]]
        hits = np.nonzero(m[:, col])[0]
        hits = hits[hits != row]
        m[hits] ^= m[row]
        rhs[hits] ^= rhs[row]
        pivot_cols.append(col)
        row += 1

    # Rows below the pivots are all-zero; a nonzero rhs there is a contradiction.
    if np.any(rhs[row:]):
        return None

    x = np.zeros(cols, dtype=np.uint8)
    for r, col in enumerate(pivot_cols):
        x[col] = rhs[r]
    return x


def gf2_inv(a: np.ndarray) -> np.ndarray:
    """Inverse of a square binary matrix.

    Raises:
        GF2SingularError: If the matrix is singular over GF(2)
    """
    m = _as_bits(a)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    aug = np.concatenate([m, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if pivots.size == 0:
            raise GF2SingularError("matrix is singular over GF(2)")
        piv = col + int(pivots[0])
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        hits = np.nonzero(aug[:, col])[0]
        hits = hits[hits != col]
        aug[hits] ^= aug[col]
    return aug[:, n:]


def in_row_space(a: np.ndarray, v: np.ndarray) -> bool:
    """Whether ``v`` is a GF(2) combination of the rows of ``a``."""
    a = np.asarray(a, dtype=np.uint8)
    if a.size == 0:
        return not np.any(np.asarray(v) % 2)
    return gf2_solve(a.T, v) is not None
