"""ASCII and SVG frames of a surgery schedule, one frame per step.

Both renderers are pure functions of the schedule. Tiles taking part in
an action of the step are active, everything else is idle, and two
horizontally or vertically adjacent tiles of the same protocol action are
joined by a seam mark.
"""

import io

import matplotlib
from matplotlib.axes import Axes
from matplotlib.figure import Figure
from matplotlib.patches import Rectangle

from src.models.schedule import SurgerySchedule, SurgeryStep, TileKind
from src.utils.logging import get_logger

logger = get_logger(__name__)

ASCII_LEGEND = "legend: [x] active  (x) idle  = : merged seam  T = transitional tile"

Slot = tuple[int, int]


class RenderError(Exception):
    """Raised for out-of-range steps or unknown formats."""


def tile_label(tile_id: str, kind: TileKind) -> str:
    """Short glyph text: ``q3`` for qubit tiles, ``T0`` for TRN tiles."""
    if kind is TileKind.TRN:
        return "T" + tile_id.removeprefix("trn")
    return tile_id


def _select_steps(s: SurgerySchedule, step: int | None) -> list[SurgeryStep]:
    if step is None:
        return list(s.steps)
    if not 1 <= step <= len(s.steps):
        raise RenderError(f"step {step} is outside 1..{len(s.steps)}")
    return [s.steps[step - 1]]


def _seams(s: SurgerySchedule, step: SurgeryStep) -> set[frozenset[Slot]]:
    """Adjacent slot pairs merged through a TRN tile in this step."""
    seams: set[frozenset[Slot]] = set()
    for action in step.actions:
        if not action.kind.uses_trn:
            continue
        slots = [s.tiles[t].slot for t in sorted(action.tiles())]
        for a in slots:
            for b in slots:
                if abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1:
                    seams.add(frozenset((a, b)))
    return seams


def _action_lines(s: SurgerySchedule, step: SurgeryStep) -> list[str]:
    lines = []
    for action in step.actions:
        text = action.describe()
        if action.trn:
            text += f" via {tile_label(action.trn, TileKind.TRN)}"
        lines.append(f"  - {text}")
    return lines


# --- ascii ---


def ascii_frame(s: SurgerySchedule, step: SurgeryStep) -> str:
    """One text frame of a step."""
    by_slot = {info.slot: (tid, info.kind) for tid, info in s.tiles.items()}
    busy = step.busy_tiles()
    seams = _seams(s, step)
    width = max((len(tile_label(t, k)) for t, k in by_slot.values()), default=2) + 2
    rows, cols = s.grid

    def glyph(slot: Slot) -> str:
        if slot not in by_slot:
            return " " * width
        tile_id, kind = by_slot[slot]
        label = tile_label(tile_id, kind)
        left, right = ("[", "]") if tile_id in busy else ("(", ")")
        return f"{left}{label.center(width - 2)}{right}"

    lines = [f"step {step.index}/{len(s.steps)}"]
    for r in range(rows):
        parts = []
        for c in range(cols):
            parts.append(glyph((r, c)))
            if c < cols - 1:
                parts.append("=" if frozenset(((r, c), (r, c + 1))) in seams else " ")
        lines.append("".join(parts).rstrip())
        if r < rows - 1:
            below = [
                ":".center(width) if frozenset(((r, c), (r + 1, c))) in seams else " " * width
                for c in range(cols)
            ]
            lines.append(" ".join(below).rstrip())
    lines.extend(_action_lines(s, step))
    if step.resets:
        labels = ", ".join(tile_label(t, TileKind.TRN) for t in step.resets)
        lines.append(f"  reset |+>: {labels}")
    return "\n".join(lines)


def render_ascii(s: SurgerySchedule, step: int | None = None) -> str:
    """All frames (or one), separated by blank lines; empty for an empty schedule.

    Raises:
        RenderError: If step is out of range
    """
    frames = [ascii_frame(s, st) for st in _select_steps(s, step)]
    if not frames:
        return ""
    return "\n\n".join([ASCII_LEGEND, *frames]) + "\n"
# --- svg ---

SVG_TILE_INCHES = 0.9
SVG_TITLE_INCHES = 0.35
_FILL = {TileKind.QUBIT: "#cfe3ff", TileKind.TRN: "#ffe3b3"}
_EDGE = {TileKind.QUBIT: "#1f4e99", TileKind.TRN: "#a86200"}
_SEAM = "#c0392b"
_SVG_RC = {"svg.fonttype": "none", "svg.hashsalt": "latsurg"}


def _draw_frame(ax: Axes, s: SurgerySchedule, step: SurgeryStep) -> None:
    """Tiles as rectangles, seams as lines; artist ids are ``step-<k>-<tile>-<state>``."""
    rows, cols = s.grid
    busy = step.busy_tiles()
    prefix = f"step-{step.index}"
    ax.set_gid(prefix)
    ax.set_title(f"step {step.index}/{len(s.steps)}", loc="left", fontsize=10)
    ax.set_xlim(0, cols)
    ax.set_ylim(-rows, 0)
    ax.set_aspect("equal")
    ax.axis("off")

    for k, seam in enumerate(sorted(tuple(sorted(pair)) for pair in _seams(s, step))):
        (r1, c1), (r2, c2) = seam
        ax.plot(
            [c1 + 0.5, c2 + 0.5],
            [-r1 - 0.5, -r2 - 0.5],
            color=_SEAM,
            linewidth=6,
            zorder=1,
            gid=f"{prefix}-seam-{k}",
        )
    for tile_id, info in s.tiles.items():
        state = "active" if tile_id in busy else "idle"
        r, c = info.slot
        ax.add_patch(
            Rectangle(
                (c + 0.08, -r - 0.92),
                0.84,
                0.84,
                facecolor=_FILL[info.kind],
                edgecolor=_EDGE[info.kind],
                linewidth=2.5 if state == "active" else 1.0,
                alpha=1.0 if state == "active" else 0.35,
                zorder=2,
                gid=f"{prefix}-{tile_id}-{state}",
            )
        )
        ax.text(
            c + 0.5,
            -r - 0.5,
            tile_label(tile_id, info.kind),
            ha="center",
            va="center",
            family="monospace",
            fontsize=10,
            zorder=3,
        )


def render_svg(s: SurgerySchedule, step: int | None = None) -> str:
    """SVG document with one frame per step, stacked vertically.

    Raises:
        RenderError: If step is out of range
    """
    steps = _select_steps(s, step)
    rows, cols = s.grid
    frame_height = rows * SVG_TILE_INCHES + SVG_TITLE_INCHES
    fig = Figure(figsize=(cols * SVG_TILE_INCHES, max(len(steps), 1) * frame_height))
    for k, st in enumerate(steps, start=1):
        _draw_frame(fig.add_subplot(len(steps), 1, k), s, st)

    buffer = io.StringIO()
    with matplotlib.rc_context(_SVG_RC):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    logger.debug("Rendered %d SVG frame(s)", len(steps))
    return buffer.getvalue()
