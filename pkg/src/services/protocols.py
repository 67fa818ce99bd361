"""Logical gates composed from surgery primitives.

The two-patch gates run in an L-shaped bay: the control sits above the
transitional patch (TRN) so their facing edges are smooth, and the target
sits to TRN's right so their facing edges are rough. CZ needs a smooth edge
on both operands, so TRN visits the slot below the target halfway through.
Split byproducts are applied as soon as a split reports them; the final
correction is read from a frozen table keyed by the three protocol outcomes.
"""

import math

import numpy as np

from src.models.gate import RotationTerm
from src.models.grid import Tile
from src.models.measurement import Basis
from src.models.patch import Orientation, PatchLayout
from src.models.pauli_string import PauliString
from src.models.protocol_trace import ProtocolTrace
from src.models.surgery import SplitResult
from src.services.patch_builder import logical_operator
from src.services.statevector import rotation_matrix
from src.services.surgery import GridSpaceError, SurgeryService
from src.utils.logging import get_logger

logger = get_logger(__name__)

Outcomes = tuple[int, int, int]

# (Z_C Z_TRN, X_TRN X_T, Z_TRN readout) -> (correction on control, correction on target)
CNOT_CORRECTIONS: dict[Outcomes, tuple[str, str]] = {
    (1, 1, 1): ("I", "I"),
    (1, 1, -1): ("I", "X"),
    (1, -1, 1): ("Z", "I"),
    (1, -1, -1): ("Z", "X"),
    (-1, 1, 1): ("I", "X"),
    (-1, 1, -1): ("I", "I"),
    (-1, -1, 1): ("Z", "X"),
    (-1, -1, -1): ("Z", "I"),
}

# (Z_A Z_TRN, X_TRN Z_B, Z_TRN readout) in TRN's original frame -> (correction on a, on b)
CZ_CORRECTIONS: dict[Outcomes, tuple[str, str]] = {
    (1, 1, 1): ("I", "I"),
    (1, 1, -1): ("I", "Z"),
    (1, -1, 1): ("Z", "I"),
    (1, -1, -1): ("Z", "Z"),
    (-1, 1, 1): ("I", "Z"),
    (-1, 1, -1): ("I", "I"),
    (-1, -1, 1): ("Z", "Z"),
    (-1, -1, -1): ("Z", "I"),
}

_STABILIZER_SEEDS = {
    "0": np.array([1, 0], dtype=np.complex128),
    "1": np.array([0, 1], dtype=np.complex128),
    "+": np.array([1, 1], dtype=np.complex128) / math.sqrt(2),
    "-": np.array([1, -1], dtype=np.complex128) / math.sqrt(2),
    "i": np.array([1, 1j], dtype=np.complex128) / math.sqrt(2),
    "-i": np.array([1, -1j], dtype=np.complex128) / math.sqrt(2),
}


class ProtocolError(Exception):
    """Base exception for logical-gate protocols."""


class ProtocolGeometryError(ProtocolError):
    """Raised when patches are not placed as the protocol bay requires."""


class TrnStateError(ProtocolError):
    """Raised when the transitional patch is not in |+>_L."""


def seed_for_rotation(r: RotationTerm) -> str | np.ndarray:
    """Seed state e^{-i phi P}|+> for Z rotations, e^{-i phi P}|0> for X and Y.

    Returns:
        A stabilizer seed label when the state is one, otherwise amplitudes

    Raises:
        ProtocolError: If the rotation acts on more than one qubit
    """
    if r.pauli.n != 1:
        raise ProtocolError(f"only single-qubit rotations can be injected, got {r.label()}")
    axis = r.axis
    base = _STABILIZER_SEEDS["+"] if axis in ("Z", "I") else _STABILIZER_SEEDS["0"]
    vec = rotation_matrix(r).matrix @ base
    label = match_seed(vec)
    return vec if label is None else label


def match_seed(vec: np.ndarray) -> str | None:
    """Stabilizer seed label equal to a normalized 2-vector up to phase, if any."""
    for label, candidate in _STABILIZER_SEEDS.items():
        if math.isclose(abs(np.vdot(candidate, vec)), 1.0, abs_tol=1e-9):
            return label
    return None


def correction_letters(table: dict[Outcomes, tuple[str, str]], outcomes: Outcomes):
    """Look up a frozen correction; every outcome triple has an entry."""
    return table[outcomes]


class ProtocolService:
    """Logical-gate procedures on top of a SurgeryService."""

    def __init__(self, surgery: SurgeryService) -> None:
        self.surgery = surgery
        self.sim = surgery.sim
        self.registry = surgery.registry

    # --- helpers ---

    def _apply_logical(self, p: PatchLayout, letter: str) -> None:
        if letter != "I":
            self.sim.apply_pauli(logical_operator(p, letter))

    def _apply_byproduct(self, split: SplitResult) -> str:
        if not split.has_byproduct:
            return ""
        self.sim.apply_pauli(split.byproduct)
        letter = "X" if split.byproduct.same_letters(split.right.logical_x) else "Z"
        return f"{letter}_L({split.right.patch_id})"

    def _check_bay(self, upper: PatchLayout, trn: PatchLayout, right: PatchLayout) -> None:
        for p in (upper, trn, right):
            if p.orientation is not Orientation.STANDARD:
                raise ProtocolGeometryError(f"{p.patch_id} must be in the standard frame")
        step = 2 * trn.d + 2
        (ur, uc), (tr, tc), (rr, rc) = upper.origin, trn.origin, right.origin
        if not (uc == tc and tr - ur == step):
            raise ProtocolGeometryError(
                f"{upper.patch_id} {upper.origin} must sit directly above TRN {trn.origin}"
            )
        if not (rr == tr and rc - tc == step):
            raise ProtocolGeometryError(
                f"{right.patch_id} {right.origin} must sit directly right of TRN {trn.origin}"
            )

    def _check_trn(self, trn: PatchLayout) -> None:
        if self.sim.contains_stabilizer(trn.logical_x) != 1:
            raise TrnStateError(f"TRN {trn.patch_id} is not in |+>_L")

    def reset_plus(self, p: PatchLayout) -> None:
        """Reinitialize a whole patch to |+>_L."""
        self.sim.reset_qubits(p.data_indices(), Basis.PLUS)
        self.surgery.settle(p)

    def _bridge(
        self, control: PatchLayout, target: PatchLayout, trn: PatchLayout, trace: ProtocolTrace
    ) -> Outcomes:
        """ZZ(control, TRN), XX(TRN, target), then read TRN in Z."""
        s = self.surgery
        merge1 = s.smooth_merge(control, trn)
        trace.add("smooth_merge", (control.patch_id, trn.patch_id), zz=merge1.joint_outcome)
        split1 = s.smooth_split(merge1)
        trace.add(
            "smooth_split",
            (control.patch_id, trn.patch_id),
            self._apply_byproduct(split1),
            seam=_rep_outcome(split1),
        )
        merge2 = s.rough_merge(trn, target)
        trace.add("rough_merge", (trn.patch_id, target.patch_id), xx=merge2.joint_outcome)
        split2 = s.rough_split(merge2)
        trace.add(
            "rough_split",
            (trn.patch_id, target.patch_id),
            self._apply_byproduct(split2),
            seam=_rep_outcome(split2),
        )
        m3 = self.measure_logical(trn, "Z")
        trace.add("measure_logical", (trn.patch_id,), z=m3)
        self.reset_plus(trn)
        trace.add("reset_trn", (trn.patch_id,))
        return (merge1.joint_outcome, merge2.joint_outcome, m3)

    # --- two-patch gates ---

    def logical_cnot(
        self, control: PatchLayout, target: PatchLayout, trn: PatchLayout
    ) -> ProtocolTrace:
        """CNOT from control to target through a TRN patch in |+>_L.

        Raises:
            ProtocolGeometryError: If the patches are not in the bay arrangement
            TrnStateError: If TRN is not in |+>_L
        """
        self._check_bay(control, trn, target)
        self._check_trn(trn)
        trace = ProtocolTrace("cnot")
        outcomes = self._bridge(control, target, trn, trace)
        fix_c, fix_t = correction_letters(CNOT_CORRECTIONS, outcomes)
        self._apply_logical(control, fix_c)
        self._apply_logical(target, fix_t)
        trace.corrections = {control.patch_id: fix_c, target.patch_id: fix_t}
        logger.debug(
            "CNOT %s -> %s: outcomes %s, corrections %s%s",
            control.patch_id,
            target.patch_id,
            outcomes,
            fix_c,
            fix_t,
        )
        return trace

    def _check_workspace(self, trn: PatchLayout, origin: tuple[int, int]) -> None:
        size = self.surgery.realign_distance(trn.d)
        needed = set(Tile(f"{trn.patch_id}~", size, origin).cells())
        if not needed <= self.registry.free_cells():
            raise GridSpaceError(
                f"insufficient grid space for the auxiliary region of {trn.patch_id} at {origin}"
            )

    def logical_cz(self, a: PatchLayout, b: PatchLayout, trn: PatchLayout) -> ProtocolTrace:
        """CZ on (a, b) through a TRN patch in |+>_L.

        ZZ(a, TRN) is measured across TRN's top edge. TRN then moves to the
        slot below b, takes a logical H there and is merged with b across
        b's bottom edge, which reads X_TRN Z_b in TRN's original frame. An X
        readout of TRN closes the gate.

        Raises:
            ProtocolGeometryError: If the patches are not in the bay arrangement
            TrnStateError: If TRN is not in |+>_L
            GridSpaceError: If the slot below b and its realignment region are not free
        """
        self._check_bay(a, trn, b)
        self._check_trn(trn)
        step = 2 * trn.d + 2
        home = trn.origin
        below_b = (b.origin[0] + step, b.origin[1])
        self._check_workspace(trn, below_b)
        s = self.surgery
        trace = ProtocolTrace("cz")

        merge1 = s.smooth_merge(a, trn)
        trace.add("smooth_merge", (a.patch_id, trn.patch_id), zz=merge1.joint_outcome)
        split1 = s.smooth_split(merge1)
        trace.add(
            "smooth_split",
            (a.patch_id, trn.patch_id),
            self._apply_byproduct(split1),
            seam=_rep_outcome(split1),
        )

        parked = s.move_patch(trn, below_b)
        trace.add("move_patch", (trn.patch_id,))
        trace.extend(self.logical_h(parked))
        merge2 = s.smooth_merge(b, parked)
        trace.add("smooth_merge", (b.patch_id, trn.patch_id), zx=merge2.joint_outcome)
        split2 = s.smooth_split(merge2)
        trace.add(
            "smooth_split",
            (b.patch_id, trn.patch_id),
            self._apply_byproduct(split2),
            seam=_rep_outcome(split2),
        )
        m3 = self.measure_logical(parked, "X")
        trace.add("measure_logical", (trn.patch_id,), x=m3)

        s.move_patch(parked, home)
        trace.add("move_patch", (trn.patch_id,))
        self.reset_plus(trn)
        trace.add("reset_trn", (trn.patch_id,))

        outcomes = (merge1.joint_outcome, merge2.joint_outcome, m3)
        fix_a, fix_b = correction_letters(CZ_CORRECTIONS, outcomes)
        self._apply_logical(a, fix_a)
        self._apply_logical(b, fix_b)
        trace.corrections = {a.patch_id: fix_a, b.patch_id: fix_b}
        logger.debug(
            "CZ %s, %s: outcomes %s, corrections %s%s",
            a.patch_id,
            b.patch_id,
            outcomes,
            fix_a,
            fix_b,
        )
        return trace

    # --- single-patch gates ---

    def logical_s(self, p: PatchLayout, trn: PatchLayout, dagger: bool = False) -> ProtocolTrace:
        """S_L (or its inverse) on a live patch, consuming TRN prepared in |i>_L.

        ZZ(p, TRN) then X readout of TRN; differing outcomes owe Z_L on p.

        Raises:
            ProtocolGeometryError: If p does not sit directly above TRN
        """
        for q in (p, trn):
            if q.orientation is not Orientation.STANDARD:
                raise ProtocolGeometryError(f"{q.patch_id} must be in the standard frame")
        if p.origin[1] != trn.origin[1] or trn.origin[0] - p.origin[0] != 2 * trn.d + 2:
            raise ProtocolGeometryError(f"{p.patch_id} must sit directly above TRN")
        trace = ProtocolTrace("s_dag" if dagger else "s")
        self.reset_zero_raw(trn)
        self.surgery.inject_state(trn, "i")
        trace.add("inject_state", (trn.patch_id,))
        merge = self.surgery.smooth_merge(p, trn)
        trace.add("smooth_merge", (p.patch_id, trn.patch_id), zz=merge.joint_outcome)
        split = self.surgery.smooth_split(merge)
        trace.add(
            "smooth_split",
            (p.patch_id, trn.patch_id),
            self._apply_byproduct(split),
            seam=_rep_outcome(split),
        )
        mx = self.measure_logical(trn, "X")
        trace.add("measure_logical", (trn.patch_id,), x=mx)
        self.reset_plus(trn)
        trace.add("reset_trn", (trn.patch_id,))
        fix = "Z" if (merge.joint_outcome * mx == -1) != dagger else "I"
        self._apply_logical(p, fix)
        trace.corrections = {p.patch_id: fix}
        return trace

    def reset_zero_raw(self, p: PatchLayout) -> None:
        """Put every data qubit of a patch in |0>, ready for injection."""
        self.sim.reset_qubits(p.data_indices(), Basis.ZERO)

    def logical_h(self, p: PatchLayout) -> ProtocolTrace:
        """Transversal H followed by realignment to the standard frame."""
        trace = ProtocolTrace("h")
        turned = self.surgery.transversal_h(p)
        trace.add("transversal_h", (p.patch_id,))
        _, owed = self.surgery.hadamard_realign(turned)
        byproduct = ""
        if not owed.is_identity():
            self.sim.apply_pauli(owed)
            byproduct = _logical_name(p, owed)
        trace.add("hadamard_realign", (p.patch_id,), byproduct)
        return trace

    def logical_pauli(self, p: PatchLayout, which: str) -> ProtocolTrace:
        """Apply the weight-d X_L or Z_L representative."""
        if which not in ("X", "Z"):
            raise ProtocolError(f"logical Pauli must be X or Z, got {which!r}")
        self._apply_logical(p, which)
        trace = ProtocolTrace(f"pauli_{which.lower()}")
        trace.add("logical_pauli", (p.patch_id,), f"{which}_L({p.patch_id})")
        return trace

    def inject_rotation(self, p: PatchLayout, r: RotationTerm) -> ProtocolTrace:
        """Prepare a reset patch in the logical state the rotation makes.

        Raises:
            ProtocolError: For multi-qubit rotations
            InjectionPreconditionError: If the patch is not reset
        """
        seed = seed_for_rotation(r)
        self.surgery.inject_state(p, seed)
        trace = ProtocolTrace("inject")
        trace.add("inject_state", (p.patch_id,))
        logger.debug("Injected %s into %s", r.label(), p.patch_id)
        return trace

    def measure_logical(self, p: PatchLayout, basis: str) -> int:
        """Measure X_L or Z_L; the patch stays a code state."""
        if basis not in ("X", "Z"):
            raise ProtocolError(f"logical measurement basis must be X or Z, got {basis!r}")
        return self.sim.measure_pauli(logical_operator(p, basis)).value


def _rep_outcome(split: SplitResult) -> int:
    return -1 if split.has_byproduct else 1


def _logical_name(p: PatchLayout, owed: PauliString) -> str:
    letters = []
    if not owed.commutes_with(p.logical_z):
        letters.append("X")
    if not owed.commutes_with(p.logical_x):
        letters.append("Z")
    return "".join(letters) + f"_L({p.patch_id})"
