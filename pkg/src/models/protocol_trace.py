"""Outcome record of a logical-gate protocol."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class TraceStep:
    """One primitive invocation.

    Attributes:
        action: Primitive name, e.g. ``"smooth_merge"``
        patches: Patch ids the primitive touched
        outcomes: Named +-1 results (joint outcome, seam readout, ...)
        byproduct: Logical Pauli owed after the step, e.g. ``"X_L(T)"``, or ``""``
    """

    action: str
    patches: tuple[str, ...]
    outcomes: dict[str, int] = field(default_factory=dict)
    byproduct: str = ""

    def to_dict(self) -> dict:
        return {
            "action": self.action,
            "patches": list(self.patches),
            "outcomes": dict(self.outcomes),
            "byproduct": self.byproduct,
        }


@dataclass
class ProtocolTrace:
    """Ordered steps of a protocol and the logical corrections it applied.

    Attributes:
        protocol: Protocol name, e.g. ``"cnot"``
        steps: Primitive invocations in execution order
        corrections: Patch id -> logical Pauli letters applied at the end
    """

    protocol: str
    steps: list[TraceStep] = field(default_factory=list)
    corrections: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate correction letters."""
        for patch_id, letters in self.corrections.items():
            if set(letters) - set("IXZ"):
                raise ValueError(f"correction on {patch_id} must use I, X, Z, got {letters!r}")

    def add(self, action: str, patches: tuple[str, ...], byproduct: str = "", **outcomes: int):
        self.steps.append(TraceStep(action, patches, dict(outcomes), byproduct))

    def extend(self, other: "ProtocolTrace") -> None:
        self.steps.extend(other.steps)

    def outcome(self, action: str, name: str) -> int:
        """First recorded outcome ``name`` of ``action``."""
        for step in self.steps:
            if step.action == action and name in step.outcomes:
                return step.outcomes[name]
        raise KeyError(f"{action}.{name}")

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "steps": [s.to_dict() for s in self.steps],
            "corrections": dict(sorted(self.corrections.items())),
        }
