"""Unit tests for the logical-gate protocols."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from src.models.gate import RotationTerm
from src.services.patch_builder import logical_tags
from src.services.protocols import (
    CNOT_CORRECTIONS,
    CZ_CORRECTIONS,
    ProtocolError,
    ProtocolGeometryError,
    ProtocolService,
    TrnStateError,
    match_seed,
    seed_for_rotation,
)
from src.services.surgery import GridSpaceError

CNOT_CASES = [
    ("0", "0", ["+IZ", "+ZI"]),
    ("1", "0", ["-IZ", "-ZI"]),
    ("0", "1", ["-IZ", "+ZI"]),
    ("1", "1", ["+IZ", "-ZI"]),
    ("+", "0", ["+XX", "+ZZ"]),
    ("+", "-", ["-IX", "-XI"]),
]

# Room for TRN to visit the slot below the target during CZ.
CZ_SLOTS = (4, 3)

CZ_CASES = [
    ("+", "+", ["+XZ", "+ZX"]),
    ("1", "+", ["-IX", "-ZI"]),
    ("0", "-", ["-IX", "+ZI"]),
]


def _prepared_bay(make_bay, control_seed, target_seed, d=2, seed=0, slots=(2, 2)):
    protocols, control, trn, target = make_bay(d=d, seed=seed, slots=slots)
    protocols.surgery.inject_state(control, control_seed)
    protocols.surgery.inject_state(target, target_seed)
    return protocols, control, trn, target


class TestCnot:
    """Tests for the TRN-bridged CNOT."""

    @pytest.mark.parametrize(("c_seed", "t_seed", "tags"), CNOT_CASES)
    @pytest.mark.parametrize("seed", range(3))
    def test_truth_table(self, make_bay, c_seed, t_seed, tags, seed):
        """The bridge acts as CNOT on every stabilizer input."""
        protocols, control, trn, target = _prepared_bay(make_bay, c_seed, t_seed, seed=seed)
        protocols.logical_cnot(control, target, trn)
        assert logical_tags(protocols.sim, [control, target]) == tags

    def test_distance_three(self, make_bay):
        """The bridge works unchanged at d=3."""
        protocols, control, trn, target = _prepared_bay(make_bay, "+", "0", d=3)
        protocols.logical_cnot(control, target, trn)
        assert logical_tags(protocols.sim, [control, target]) == ["+XX", "+ZZ"]

    def test_trace_records_outcomes(self, make_bay):
        """The trace lists primitives in order and the table-driven correction."""
        protocols, control, trn, target = _prepared_bay(make_bay, "+", "+", seed=5)
        trace = protocols.logical_cnot(control, target, trn)
        assert [s.action for s in trace.steps] == [
            "smooth_merge",
            "smooth_split",
            "rough_merge",
            "rough_split",
            "measure_logical",
            "reset_trn",
        ]
        outcomes = (
            trace.outcome("smooth_merge", "zz"),
            trace.outcome("rough_merge", "xx"),
            trace.outcome("measure_logical", "z"),
        )
        fix_c, fix_t = CNOT_CORRECTIONS[outcomes]
        assert trace.corrections == {"c": fix_c, "t": fix_t}

    def test_trn_returns_to_plus(self, make_bay):
        """TRN is back in |+>_L after the gate."""
        protocols, control, trn, target = _prepared_bay(make_bay, "1", "0", seed=2)
        protocols.logical_cnot(control, target, trn)
        assert logical_tags(protocols.sim, [trn]) == ["+X"]

    def test_trn_not_plus_raises(self, make_bay):
        """A TRN outside |+>_L is refused."""
        protocols, control, trn, target = make_bay()
        protocols.reset_zero_raw(trn)
        with pytest.raises(TrnStateError, match="not in \\|\\+>_L"):
            protocols.logical_cnot(control, target, trn)

    def test_wrong_bay_raises(self, make_bay):
        """Swapping control and target breaks the bay arrangement."""
        protocols, control, trn, target = make_bay()
        with pytest.raises(ProtocolGeometryError, match="directly above TRN"):
            protocols.logical_cnot(target, control, trn)

    def test_every_outcome_branch_gives_cnot(self, make_bay):
        """All eight outcome triples occur across seeds and each one yields CNOT."""
        seen = set()
        for seed in range(400):
            protocols, control, trn, target = _prepared_bay(make_bay, "+", "0", seed=seed)
            trace = protocols.logical_cnot(control, target, trn)
            assert logical_tags(protocols.sim, [control, target]) == ["+XX", "+ZZ"], seed
            seen.add(
                (
                    trace.outcome("smooth_merge", "zz"),
                    trace.outcome("rough_merge", "xx"),
                    trace.outcome("measure_logical", "z"),
                )
            )
            if len(seen) == len(CNOT_CORRECTIONS):
                break
        assert seen == set(CNOT_CORRECTIONS)

    def test_correction_tables_cover_all_outcomes(self):
        """Every outcome triple has an entry; both gates fix the second operand on m1*m3 = -1."""
        triples = set(product((1, -1), repeat=3))
        assert set(CNOT_CORRECTIONS) == triples
        assert set(CZ_CORRECTIONS) == triples
        for key, (fix_c, fix_t) in CNOT_CORRECTIONS.items():
            assert CZ_CORRECTIONS[key] == (fix_c, fix_t.replace("X", "Z"))


class TestCz:
    """Tests for CZ through TRN."""

    @pytest.mark.parametrize(("a_seed", "b_seed", "tags"), CZ_CASES)
    @pytest.mark.parametrize("seed", range(2))
    def test_truth_table(self, make_bay, a_seed, b_seed, tags, seed):
        """The merge sequence acts as CZ."""
        protocols, a, trn, b = _prepared_bay(make_bay, a_seed, b_seed, seed=seed, slots=CZ_SLOTS)
        protocols.logical_cz(a, b, trn)
        assert logical_tags(protocols.sim, [a, b]) == tags

    def test_distance_three(self, make_bay):
        """CZ works at d=3, where TRN is realigned through d=5."""
        protocols, a, trn, b = _prepared_bay(make_bay, "+", "+", d=3, slots=CZ_SLOTS)
        protocols.logical_cz(a, b, trn)
        assert logical_tags(protocols.sim, [a, b]) == ["+XZ", "+ZX"]

    def test_trace_measures_both_operands_directly(self, make_bay):
        """Neither operand sees a Hadamard; TRN is merged with a, then with b."""
        protocols, a, trn, b = _prepared_bay(make_bay, "0", "0", slots=CZ_SLOTS)
        trace = protocols.logical_cz(a, b, trn)
        assert [(s.action, s.patches) for s in trace.steps if "merge" in s.action] == [
            ("smooth_merge", ("c", "trn")),
            ("smooth_merge", ("t", "trn")),
        ]
        hadamards = [s.patches for s in trace.steps if s.action == "transversal_h"]
        assert hadamards == [("trn",)]
        outcomes = (
            trace.outcome("smooth_merge", "zz"),
            trace.outcome("smooth_merge", "zx"),
            trace.outcome("measure_logical", "x"),
        )
        assert trace.corrections == dict(zip(("c", "t"), CZ_CORRECTIONS[outcomes], strict=True))
        assert trace.protocol == "cz"

    def test_trn_returns_home_in_plus(self, make_bay):
        """TRN ends on its own tile in |+>_L and the visited slot is free again."""
        protocols, a, trn, b = _prepared_bay(make_bay, "1", "+", seed=3, slots=CZ_SLOTS)
        protocols.logical_cz(a, b, trn)
        assert protocols.registry.tile("trn").origin == trn.origin
        assert logical_tags(protocols.sim, [trn]) == ["+X"]
        assert (12, 6) in protocols.registry.free_cells()

    def test_missing_workspace_raises_before_merging(self, make_bay):
        """Without room below the target nothing is measured."""
        protocols, a, trn, b = _prepared_bay(make_bay, "+", "+")
        with pytest.raises(GridSpaceError, match="insufficient grid space for the auxiliary"):
            protocols.logical_cz(a, b, trn)
        assert logical_tags(protocols.sim, [a, b]) == ["+IX", "+XI"]

    @pytest.mark.parametrize(("a_seed", "b_seed", "tags"), CZ_CASES)
    def test_matches_hadamard_conjugated_cnot(self, make_bay, a_seed, b_seed, tags):
        """H on b, CNOT, H on b reaches the same state as the direct sequence."""
        protocols, a, trn, b = _prepared_bay(make_bay, a_seed, b_seed, seed=1, slots=CZ_SLOTS)
        protocols.logical_h(b)
        protocols.logical_cnot(a, b, trn)
        protocols.logical_h(b)
        assert logical_tags(protocols.sim, [a, b]) == tags

    @pytest.mark.slow
    def test_every_outcome_branch_gives_cz(self, make_bay):
        """All eight outcome triples occur across seeds and each one yields CZ."""
        seen = set()
        for seed in range(400):
            protocols, a, trn, b = _prepared_bay(make_bay, "+", "+", seed=seed, slots=CZ_SLOTS)
            trace = protocols.logical_cz(a, b, trn)
            assert logical_tags(protocols.sim, [a, b]) == ["+XZ", "+ZX"], seed
            seen.add(
                (
                    trace.outcome("smooth_merge", "zz"),
                    trace.outcome("smooth_merge", "zx"),
                    trace.outcome("measure_logical", "x"),
                )
            )
            if len(seen) == len(CZ_CORRECTIONS):
                break
        assert seen == set(CZ_CORRECTIONS)


class TestSinglePatch:
    """Tests for S, H, Pauli and measurement on one patch."""

    @pytest.mark.parametrize(
        ("label", "dagger", "tags"),
        [("+", False, ["+Y"]), ("+", True, ["-Y"]), ("0", False, ["+Z"]), ("i", False, ["-X"])],
    )
    @pytest.mark.parametrize("seed", range(3))
    def test_logical_s(self, make_bay, label, dagger, tags, seed):
        """S_L maps |+> to |i> and |i> to |->; S_L^dagger maps |+> to |-i>."""
        protocols, control, trn, _ = make_bay(seed=seed)
        protocols.surgery.inject_state(control, label)
        trace = protocols.logical_s(control, trn, dagger=dagger)
        assert logical_tags(protocols.sim, [control]) == tags
        assert logical_tags(protocols.sim, [trn]) == ["+X"]
        assert trace.protocol == ("s_dag" if dagger else "s")

    def test_logical_s_needs_trn_below(self, make_bay):
        """S_L runs only with TRN directly below the patch."""
        protocols, _, trn, target = make_bay()
        with pytest.raises(ProtocolGeometryError, match="directly above TRN"):
            protocols.logical_s(target, trn)

    @pytest.mark.parametrize(("label", "tags"), [("0", ["+X"]), ("+", ["+Z"]), ("i", ["-Y"])])
    def test_logical_h(self, make_service, make_patch, label, tags):
        """H_L swaps X and Z and negates Y."""
        protocols = ProtocolService(make_service(d=3, seed=4))
        p = make_patch(protocols.surgery)
        protocols.surgery.inject_state(p, label)
        trace = protocols.logical_h(p)
        assert logical_tags(protocols.sim, [p]) == tags
        assert [s.action for s in trace.steps] == ["transversal_h", "hadamard_realign"]

    @pytest.mark.parametrize(("label", "tags"), [("1", ["-Z"]), ("-", ["-X"]), ("-i", ["-Y"])])
    def test_logical_h_twice_is_identity(self, make_service, make_patch, label, tags):
        protocols = ProtocolService(make_service(d=3, seed=6))
        p = make_patch(protocols.surgery)
        protocols.surgery.inject_state(p, label)
        protocols.logical_h(p)
        protocols.logical_h(p)
        assert logical_tags(protocols.sim, [p]) == tags

    def test_logical_h_without_workspace_raises(self, make_bay):
        """The control patch has TRN directly below it."""
        protocols, control, _, _ = make_bay()
        with pytest.raises(GridSpaceError, match="insufficient grid space"):
            protocols.logical_h(control)

    def test_logical_pauli(self, make_bay):
        """X_L flips |0>_L to |1>_L and records the applied operator."""
        protocols, control, _, _ = make_bay()
        protocols.surgery.inject_state(control, "0")
        trace = protocols.logical_pauli(control, "X")
        assert logical_tags(protocols.sim, [control]) == ["-Z"]
        assert trace.steps[0].byproduct == "X_L(c)"

    def test_logical_pauli_letter_checked(self, make_bay):
        """Only X and Z are logical Paulis here."""
        protocols, control, _, _ = make_bay()
        with pytest.raises(ProtocolError, match="X or Z"):
            protocols.logical_pauli(control, "Y")

    def test_measure_logical(self, make_bay):
        """Z_L of |1>_L reads -1; bad bases are refused."""
        protocols, control, _, _ = make_bay()
        protocols.surgery.inject_state(control, "1")
        assert protocols.measure_logical(control, "Z") == -1
        with pytest.raises(ProtocolError, match="basis"):
            protocols.measure_logical(control, "Y")

    def test_inject_rotation(self, make_bay):
        """A Clifford rotation injects as its stabilizer seed."""
        protocols, control, _, _ = make_bay()
        protocols.inject_rotation(control, RotationTerm.dyadic("Z", Fraction(1, 4), (0,)))
        assert logical_tags(protocols.sim, [control]) == ["+Y"]


class TestSeeds:
    """Tests for seed_for_rotation and match_seed."""

    @pytest.mark.parametrize(
        ("axis", "fraction", "label"),
        [
            ("Z", Fraction(1, 4), "i"),
            ("Z", Fraction(-1, 4), "-i"),
            ("Z", Fraction(1, 2), "-"),
            ("X", Fraction(1, 4), "-i"),
            ("X", Fraction(1, 2), "1"),
            ("Y", Fraction(1, 4), "+"),
        ],
    )
    def test_clifford_rotations_give_labels(self, axis, fraction, label):
        """Quarter and half turns land on stabilizer seeds."""
        assert seed_for_rotation(RotationTerm.dyadic(axis, fraction, (0,))) == label

    def test_t_rotation_gives_amplitudes(self):
        """Z_{pi/8}|+> is not a stabilizer state."""
        seed = seed_for_rotation(RotationTerm.dyadic("Z", Fraction(1, 8), (0,)))
        assert isinstance(seed, np.ndarray)
        assert np.isclose(abs(seed[1] / seed[0]), 1.0)

    def test_multi_qubit_rotation_raises(self):
        """Only single-qubit rotations are injected."""
        with pytest.raises(ProtocolError, match="single-qubit"):
            seed_for_rotation(RotationTerm.dyadic("ZZ", Fraction(1, 8), (0, 1)))

    def test_match_seed_ignores_phase(self):
        """Global phase does not matter to match_seed."""
        assert match_seed(1j * np.array([1, -1]) / np.sqrt(2)) == "-"
        assert match_seed(np.array([np.cos(0.3), np.sin(0.3)])) is None
