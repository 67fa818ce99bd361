"""Pinned schedule JSON and ASCII frames for a fixed two-qubit schedule."""

from pathlib import Path

import pytest

from src.models.schedule import (
    ActionKind,
    ScheduleAction,
    SurgerySchedule,
    SurgeryStep,
    TileInfo,
    TileKind,
)
from src.services.renderer import render_ascii
from src.services.schedule_io import dump_schedule, load_schedule

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def two_qubit_schedule():
    """CNOT through a TRN tile below q0, then X_L on q1."""
    return SurgerySchedule(
        grid=(2, 2),
        distance=2,
        tiles={
            "q0": TileInfo(TileKind.QUBIT, (0, 0), 0),
            "q1": TileInfo(TileKind.QUBIT, (1, 1), 1),
            "trn0": TileInfo(TileKind.TRN, (1, 0)),
        },
        steps=[
            SurgeryStep(1, [ScheduleAction(ActionKind.CNOT, (0, 1), trn="trn0")], ["trn0"]),
            SurgeryStep(2, [ScheduleAction(ActionKind.LOGICAL_PAULI, (1,), pauli="X_L")]),
        ],
        n_qubits=2,
        circuit=["CNOT q0 q1", "X q1"],
    )


def test_schedule_json_matches_fixture(two_qubit_schedule):
    expected = (FIXTURES / "two_qubit.schedule.json").read_text()
    assert dump_schedule(two_qubit_schedule) == expected


def test_fixture_reloads_to_same_bytes():
    text = (FIXTURES / "two_qubit.schedule.json").read_text()
    assert dump_schedule(load_schedule(text)) == text


def test_ascii_frames_match_fixture(two_qubit_schedule):
    """Seams join q0 to T0 vertically and T0 to q1 horizontally in step 1 only."""
    expected = (FIXTURES / "two_qubit.frames.txt").read_text()
    assert render_ascii(two_qubit_schedule) == expected


def test_single_frame_is_a_slice_of_the_fixture(two_qubit_schedule):
    text = (FIXTURES / "two_qubit.frames.txt").read_text()
    legend = text.split("\n", 1)[0]
    last = text[text.index("step 2/2") :]
    assert render_ascii(two_qubit_schedule, step=2) == f"{legend}\n\n{last}"
