"""Unit tests for decode tables, correction and Monte Carlo rates."""

import io
import itertools

import pytest

from src.models.decoding import ErrorEvent
from src.models.patch import PatchKind
from src.services.decoder import (
    DecoderError,
    DecodeTableSizeError,
    NonDataLocationError,
    build_decode_table,
    correction_pauli,
    decode,
    decode_and_correct,
    inject_error,
    is_logical_error,
    logical_error_rate,
    syndrome_of,
    write_rate_csv,
)
from src.services.grid_registry import GridRegistry
from src.services.patch_builder import build_patch, measure_syndromes


@pytest.fixture()
def make_bare_patch():
    """Factory fixture for a rotated patch without a simulator."""

    def _make(d=3):
        registry = GridRegistry(2 * d + 1, 2 * d + 1)
        return build_patch(registry, PatchKind.ROTATED, d, (0, 0), patch_id=f"d{d}")

    return _make


@pytest.fixture()
def settled(make_service, make_patch):
    """(service, patch) with a d=3 patch in the code space."""
    service = make_service(d=3, seed=2)
    p = make_patch(service, d=3)
    service.settle(p)
    return service, p


class TestDecodeTable:
    """Tests for build_decode_table."""

    def test_zero_syndrome_maps_to_identity(self, make_bare_patch):
        """The all-quiet syndrome needs no correction."""
        p = make_bare_patch(3)
        table = build_decode_table(p)
        assert table.lookup((0,) * len(p.checks)) == ()
        assert table.check_ids == tuple(c.check_id for c in p.checks)

    def test_weight_one_entries_are_single_qubit(self, make_bare_patch):
        """A weight-1 table holds only single-qubit corrections."""
        table = build_decode_table(make_bare_patch(3), max_weight=1)
        assert all(len(c) <= 1 for c in table.entries.values())
        assert len(table) > 1

    def test_weight_two_adds_syndromes(self, make_bare_patch):
        """Raising the weight cutoff covers more syndromes."""
        p = make_bare_patch(3)
        assert len(build_decode_table(p, 2)) > len(build_decode_table(p, 1))

    def test_d4_refused(self, make_bare_patch):
        """Exhaustive tables stop at d=3."""
        with pytest.raises(DecodeTableSizeError, match="stop at d=3"):
            build_decode_table(make_bare_patch(4))

    def test_bad_weight_refused(self, make_bare_patch):
        """Only weights 1 and 2 are enumerated."""
        with pytest.raises(DecoderError, match="max_weight must be 1 or 2"):
            build_decode_table(make_bare_patch(2), max_weight=3)


class TestDecode:
    """Tests for decode on syndromes alone."""

    def test_d3_single_errors_are_corrected(self, make_bare_patch):
        """Every single-qubit error at d=3 leaves a trivial residual."""
        p = make_bare_patch(3)
        table = build_decode_table(p)
        for cell in p.data_qubits:
            for letter in ("X", "Y", "Z"):
                error = correction_pauli(p, ((cell, letter),))
                result = decode(p, syndrome_of(p, error), table)
                residual = error * result.correction
                assert not result.flagged
                assert not any(syndrome_of(p, residual))
                assert not is_logical_error(p, residual)

    def test_d2_single_errors_are_detected(self, make_bare_patch):
        """At d=2 every single-qubit error flips some check."""
        p = make_bare_patch(2)
        for cell in p.data_qubits:
            for letter in ("X", "Y", "Z"):
                assert any(syndrome_of(p, correction_pauli(p, ((cell, letter),))))

    def test_unseen_syndrome_is_flagged(self, make_bare_patch):
        """Syndromes missing from the table fall back to a pure error."""
        p = make_bare_patch(3)
        table = build_decode_table(p, max_weight=1)
        unseen = next(
            bits
            for bits in itertools.product((0, 1), repeat=len(p.checks))
            if table.lookup(bits) is None
        )
        result = decode(p, unseen, table)
        assert result.flagged
        assert syndrome_of(p, result.correction) == unseen


class TestDecodeAndCorrect:
    """Tests for correction on a simulator."""

    def test_single_error_round_trip(self, settled):
        """Inject, decode and correct returns every check to +1."""
        service, p = settled
        table = build_decode_table(p)
        cell = sorted(p.data_qubits)[4]
        error = inject_error(service.sim, p, ErrorEvent(cell, "Y"))
        result = decode_and_correct(service.sim, p, measure_syndromes(service.sim, p), table)
        assert not is_logical_error(p, error * result.correction)
        assert all(service.sim.contains_stabilizer(s) == 1 for s in p.stabilizers)

    def test_error_on_ancilla_refused(self, settled):
        """Errors go on data qubits only."""
        service, p = settled
        with pytest.raises(NonDataLocationError, match="not a data qubit"):
            inject_error(service.sim, p, ErrorEvent(p.checks[0].ancilla, "X"))

    def test_table_for_other_shape_refused(self, settled, make_bare_patch):
        """A d=2 table does not fit a d=3 patch."""
        service, p = settled
        table = build_decode_table(make_bare_patch(2))
        with pytest.raises(DecoderError, match="does not fit"):
            decode_and_correct(service.sim, p, measure_syndromes(service.sim, p), table)


class TestLogicalErrorRate:
    """Tests for the Monte Carlo estimate."""

    def test_zero_noise_never_fails(self, make_bare_patch):
        """p=0 gives no failures."""
        estimate = logical_error_rate(make_bare_patch(3), 0.0, 200, seed=1)
        assert estimate.failures == 0
        assert estimate.rate == 0.0

    def test_seeded_runs_repeat(self, make_bare_patch):
        """The same seed gives the same failure count."""
        p = make_bare_patch(2)
        first = logical_error_rate(p, 0.1, 500, seed=9)
        assert logical_error_rate(p, 0.1, 500, seed=9) == first

    @pytest.mark.slow
    def test_larger_distance_helps_at_low_noise(self, make_bare_patch):
        """At p=1% a d=3 patch fails less often than a d=2 patch."""
        rate2 = logical_error_rate(make_bare_patch(2), 0.01, 20000, seed=0).rate
        rate3 = logical_error_rate(make_bare_patch(3), 0.01, 20000, seed=0).rate
        assert rate3 < rate2

    @pytest.mark.parametrize(("p", "trials"), [(-0.1, 10), (1.5, 10), (0.1, 0)])
    def test_bad_arguments(self, make_bare_patch, p, trials):
        """Rates outside [0, 1] and empty runs are refused."""
        with pytest.raises(DecoderError):
            logical_error_rate(make_bare_patch(2), p, trials)

    def test_csv_columns(self, make_bare_patch):
        """write_rate_csv writes a header then one row per estimate."""
        stream = io.StringIO()
        write_rate_csv([logical_error_rate(make_bare_patch(2), 0.0, 10, seed=4)], stream)
        header, row = stream.getvalue().splitlines()
        assert header == "d,p,trials,failures,rate,stderr,seed"
        assert row == "2,0.0,10,0,0.0,0.0,4"
