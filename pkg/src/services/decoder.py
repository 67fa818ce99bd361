"""Pauli error injection, lookup-table decoding and logical error rates.

Decoding is single-round and noiseless in the measurements. The table is
exhaustive up to a weight cutoff, so at d <= 3 it is a true minimum-weight
decoder. Monte Carlo runs track the error as a Pauli frame over the data
qubits instead of copying a tableau per trial.
"""

import csv
import itertools
from collections.abc import Iterable
from typing import TextIO

import numpy as np

from src.models.decoding import Correction, DecodeResult, DecodeTable, ErrorEvent, RateEstimate
from src.models.patch import PatchLayout, SyndromeRecord
from src.models.pauli_string import PauliString
from src.services.patch_builder import pure_error
from src.services.simulator import Simulator
from src.utils.logging import get_logger

logger = get_logger(__name__)

MAX_TABLE_DISTANCE = 3
CSV_COLUMNS = ("d", "p", "trials", "failures", "rate", "stderr", "seed")
_ERROR_LETTERS = ("X", "Y", "Z")


class DecoderError(Exception):
    """Base exception for decoding errors."""


class DecodeTableSizeError(DecoderError):
    """Raised when exhaustive enumeration is requested for too large a patch."""


class NonDataLocationError(DecoderError):
    """Raised when an error is placed off the patch's data qubits."""


def inject_error(sim: Simulator, p: PatchLayout, e: ErrorEvent) -> PauliString:
    """Apply an error event as a Pauli gate.

    Returns:
        The applied Pauli

    Raises:
        NonDataLocationError: If the location is not a data qubit of p
    """
    if e.location not in p.qubit_index or e.location not in set(p.data_qubits):
        raise NonDataLocationError(f"{e.location} is not a data qubit of patch {p.patch_id}")
    error = PauliString.from_sparse(p.n, {p.qubit_index[e.location]: e.pauli})
    sim.apply_pauli(error)
    logger.debug("Injected %s on %s of %s", e.pauli, e.location, p.patch_id)
    return error


def correction_pauli(p: PatchLayout, correction: Correction) -> PauliString:
    """Global PauliString of a (cell, letter) correction."""
    letters = {p.qubit_index[cell]: letter for cell, letter in correction}
    return PauliString.from_sparse(p.n, letters)


def syndrome_of(p: PatchLayout, error: PauliString) -> tuple[int, ...]:
    """Check bits an error flips, in check order."""
    return tuple(0 if s.commutes_with(error) else 1 for s in p.stabilizers)


def syndrome_bits(p: PatchLayout, record: SyndromeRecord) -> tuple[int, ...]:
    """Record outcomes as bits in check order.

    Raises:
        DecoderError: If the record does not cover the patch's checks
    """
    check_ids = [c.check_id for c in p.checks]
    if set(record.values) != set(check_ids):
        raise DecoderError(f"syndrome record does not match the checks of {p.patch_id}")
    return tuple(1 if record.values[cid] == -1 else 0 for cid in check_ids)


def build_decode_table(p: PatchLayout, max_weight: int = 1) -> DecodeTable:
    """Enumerate errors up to max_weight and keep one minimum-weight correction per syndrome.

    Errors are visited by weight, then by cell sequence, then by letters
    X < Y < Z, so the first correction seen for a syndrome is the
    lexicographically smallest among the lightest.

    Raises:
        DecodeTableSizeError: If p.d > 3
        DecoderError: If max_weight is not 1 or 2
    """
    if p.d > MAX_TABLE_DISTANCE:
        raise DecodeTableSizeError(
            f"exhaustive tables stop at d={MAX_TABLE_DISTANCE}, patch {p.patch_id} has d={p.d}"
        )
    if max_weight not in (1, 2):
        raise DecoderError(f"max_weight must be 1 or 2, got {max_weight}")

    cells = sorted(p.data_qubits)
    table = DecodeTable(
        patch_id=p.patch_id,
        d=p.d,
        check_ids=tuple(c.check_id for c in p.checks),
        max_weight=max_weight,
    )
    table.entries[(0,) * len(p.checks)] = ()
    enumerated = 0
    for weight in range(1, max_weight + 1):
        for positions in itertools.combinations(cells, weight):
            for letters in itertools.product(_ERROR_LETTERS, repeat=weight):
                correction = tuple(zip(positions, letters, strict=True))
                syndrome = syndrome_of(p, correction_pauli(p, correction))
                table.entries.setdefault(syndrome, correction)
                enumerated += 1
    logger.info(
        "Decode table for %s (d=%d): %d errors, %d syndromes",
        p.patch_id,
        p.d,
        enumerated,
        len(table),
    )
    return table


def _best_effort(p: PatchLayout, syndrome: tuple[int, ...]) -> PauliString:
    record = SyndromeRecord(round=1)
    for check, bit in zip(p.checks, syndrome, strict=True):
        record.values[check.check_id] = -1 if bit else 1
        record.letters[check.check_id] = check.letter
    return pure_error(p, record)


def decode(p: PatchLayout, syndrome: tuple[int, ...], table: DecodeTable) -> DecodeResult:
    """Correction for a syndrome; unseen syndromes get a flagged pure-error fallback."""
    entry = table.lookup(syndrome)
    if entry is not None:
        return DecodeResult(syndrome, correction_pauli(p, entry))
    logger.warning("Syndrome %s is not in the %s table; using a pure error", syndrome, p.patch_id)
    return DecodeResult(syndrome, _best_effort(p, syndrome), flagged=True)


def decode_and_correct(
    sim: Simulator, p: PatchLayout, record: SyndromeRecord, table: DecodeTable
) -> DecodeResult:
    """Decode a measured record and apply the correction.

    Raises:
        DecoderError: If the record or table belongs to another patch shape
    """
    if table.check_ids != tuple(c.check_id for c in p.checks):
        raise DecoderError(f"table for {table.patch_id} does not fit patch {p.patch_id}")
    result = decode(p, syndrome_bits(p, record), table)
    if not result.correction.is_identity():
        sim.apply_pauli(result.correction)
        logger.debug("Corrected %s with %s", p.patch_id, result.correction.to_label())
    return result


def is_logical_error(p: PatchLayout, residual: PauliString) -> bool:
    """True when an error times its correction anticommutes with X_L or Z_L."""
    return not (residual.commutes_with(p.logical_x) and residual.commutes_with(p.logical_z))


# --- Monte Carlo ---


def _symplectic_rows(p: PatchLayout, ops: Iterable[PauliString]) -> np.ndarray:
    """Rows [z | x] over the data qubits, so ``rows @ [ex | ez]`` counts anticommutations."""
    data = p.data_indices()
    return np.array(
        [np.concatenate([op.z[data], op.x[data]]) for op in ops], dtype=np.int64
    ).reshape(-1, 2 * len(data))


def _frame(p: PatchLayout, op: PauliString) -> np.ndarray:
    data = p.data_indices()
    return np.concatenate([op.x[data], op.z[data]]).astype(np.int64)


def logical_error_rate(
    p: PatchLayout,
    physical_p: float,
    trials: int,
    seed: int = 0,
    table: DecodeTable | None = None,
) -> RateEstimate:
    """Depolarizing code-capacity Monte Carlo with one decode round per trial.

    Every data qubit suffers X, Y or Z with probability physical_p / 3 each.

    Raises:
        DecoderError: If trials < 1 or physical_p is outside [0, 1]
    """
    if trials < 1:
        raise DecoderError(f"trials must be >= 1, got {trials}")
    if not 0.0 <= physical_p <= 1.0:
        raise DecoderError(f"physical error rate must be in [0, 1], got {physical_p}")
    if table is None:
        table = build_decode_table(p, max_weight=2 if p.d == MAX_TABLE_DISTANCE else 1)

    m = len(p.data_qubits)
    checks = _symplectic_rows(p, p.stabilizers)
    logicals = _symplectic_rows(p, (p.logical_x, p.logical_z))

    rng = np.random.default_rng(seed)
    hit = rng.random((trials, m)) < physical_p
    letters = rng.integers(0, 3, size=(trials, m))
    ex = hit & (letters != 2)  # noqa: PLR2004
    ez = hit & (letters != 0)
    errors = np.concatenate([ex, ez], axis=1).astype(np.int64)

    syndromes = errors @ checks.T % 2
    keys = syndromes @ (1 << np.arange(checks.shape[0], dtype=np.int64))
    unique, inverse = np.unique(keys, return_inverse=True)
    corrections = np.zeros((len(unique), 2 * m), dtype=np.int64)
    flagged = 0
    for k, key in enumerate(unique):
        bits = tuple(int(key) >> i & 1 for i in range(checks.shape[0]))
        result = decode(p, bits, table)
        corrections[k] = _frame(p, result.correction)
        if result.flagged:
            flagged += int(np.count_nonzero(inverse == k))

    residual = errors ^ corrections[inverse.reshape(-1)]
    failures = int(np.count_nonzero((residual @ logicals.T % 2).any(axis=1)))
    estimate = RateEstimate(p.d, physical_p, trials, failures, seed, flagged)
    logger.info(
        "d=%d p=%g: %d/%d logical failures (%d flagged)",
        p.d,
        physical_p,
        failures,
        trials,
        flagged,
    )
    return estimate


def write_rate_csv(estimates: Iterable[RateEstimate], stream: TextIO) -> None:
    """CSV with columns d, p, trials, failures, rate, stderr, seed."""
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for estimate in estimates:
        writer.writerow(estimate.to_row())
