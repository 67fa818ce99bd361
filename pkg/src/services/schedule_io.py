"""Schedule JSON reading and writing (format version 1)."""

import json
from pathlib import Path

from src.models.schedule import ScheduleAction, SurgerySchedule, SurgeryStep, TileInfo, TileKind
from src.utils.logging import get_logger

logger = get_logger(__name__)

SCHEDULE_VERSION = 1


class ScheduleFormatError(Exception):
    """Raised for schedule files that do not match the version-1 layout."""


def schedule_to_dict(s: SurgerySchedule) -> dict:
    """JSON-ready dict with a fixed key order."""
    return {
        "version": SCHEDULE_VERSION,
        "grid": {"rows": s.grid[0], "cols": s.grid[1], "distance": s.distance},
        "tiles": {tid: info.to_dict() for tid, info in s.tiles.items()},
        "steps": [step.to_dict() for step in s.steps],
        "metrics": s.metrics,
        "circuit": {"n_qubits": s.n_qubits, "gates": list(s.circuit)},
    }


def dump_schedule(s: SurgerySchedule) -> str:
    return json.dumps(schedule_to_dict(s), indent=2) + "\n"


def load_schedule(text: str) -> SurgerySchedule:
    """Parse and validate schedule JSON.

    Raises:
        ScheduleFormatError: On invalid JSON, a wrong version or malformed records
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScheduleFormatError(f"schedule is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ScheduleFormatError("schedule must be a JSON object")
    if data.get("version") != SCHEDULE_VERSION:
        raise ScheduleFormatError(
            f"unsupported schedule version {data.get('version')!r}, expected {SCHEDULE_VERSION}"
        )
    try:
        grid = data["grid"]
        tiles = {
            tid: TileInfo(TileKind(info["kind"]), tuple(info["slot"]), info.get("qubit"))
            for tid, info in data["tiles"].items()
        }
        steps = [
            SurgeryStep(
                int(step["index"]),
                [ScheduleAction.from_dict(a) for a in step["actions"]],
                list(step.get("resets", [])),
            )
            for step in data["steps"]
        ]
        circuit = data.get("circuit", {})
        schedule = SurgerySchedule(
            grid=(int(grid["rows"]), int(grid["cols"])),
            distance=int(grid["distance"]),
            tiles=tiles,
            steps=steps,
            n_qubits=int(circuit.get("n_qubits", 0)),
            circuit=list(circuit.get("gates", [])),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ScheduleFormatError(f"malformed schedule: {e}") from e

    metrics = data.get("metrics")
    if metrics is not None and metrics != schedule.metrics:
        raise ScheduleFormatError(f"metrics {metrics} disagree with the steps {schedule.metrics}")
    if [s.index for s in steps] != list(range(1, len(steps) + 1)):
        raise ScheduleFormatError("step indices must run 1..N in order")
    return schedule


def read_schedule(path: Path) -> SurgerySchedule:
    return load_schedule(Path(path).read_text(encoding="utf-8"))


def write_schedule(s: SurgerySchedule, path: Path) -> None:
    Path(path).write_text(dump_schedule(s), encoding="utf-8")
    logger.info("Wrote schedule to %s", path)
