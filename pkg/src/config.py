"""Configuration management for the lattice-surgery toolkit."""

import os
from dataclasses import dataclass

from src.models.dense_state import MAX_DENSE_QUBITS
from src.services.compiler import parse_grid

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class Configuration:
    """Defaults loaded from environment variables; CLI flags override them."""

    # Logging
    log_level: str = "INFO"

    # Execution
    seed: int = 0
    rounds: int = 1
    dense_limit: int = MAX_DENSE_QUBITS

    # Compilation
    distance: int = 2
    trn_count: int = 1
    grid: str = "auto"

    def __post_init__(self) -> None:
        """Validate configuration after initialization."""
        self._validate()

    def _validate(self) -> None:
        """Validate configuration values."""
        if self.log_level.upper() not in _LOG_LEVELS:
            raise ValueError(
                f"LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}, got {self.log_level}"
            )

        _min_distance = 2
        if self.distance < _min_distance:
            raise ValueError(f"LATSURG_DISTANCE must be >= 2, got {self.distance}")
        if self.trn_count < 0:
            raise ValueError(f"LATSURG_TRN_COUNT must be >= 0, got {self.trn_count}")
        if self.rounds < 1:
            raise ValueError(f"LATSURG_ROUNDS must be >= 1, got {self.rounds}")

        if not 1 <= self.dense_limit <= MAX_DENSE_QUBITS:
            raise ValueError(
                f"LATSURG_DENSE_LIMIT must be in range 1-{MAX_DENSE_QUBITS}, "
                f"got {self.dense_limit}"
            )

        if self.grid != "auto":
            try:
                parse_grid(self.grid)
            except ValueError as e:
                raise ValueError(f"LATSURG_GRID: {e}") from e

    @classmethod
    def from_env(cls) -> "Configuration":
        """Load configuration from environment variables.

        Returns:
            Configuration instance

        Raises:
            ValueError: If a variable is not a valid value
        """

        # Helper to get optional env var with default
        def get_optional(key: str, default: str) -> str:
            return os.getenv(key, default)

        def get_int(key: str, default: int) -> int:
            raw = get_optional(key, str(default))
            try:
                return int(raw)
            except ValueError as e:
                raise ValueError(f"{key} must be an integer, got {raw!r}") from e

        return cls(
            log_level=get_optional("LOG_LEVEL", "INFO").upper(),
            seed=get_int("LATSURG_SEED", 0),
            rounds=get_int("LATSURG_ROUNDS", 1),
            dense_limit=get_int("LATSURG_DENSE_LIMIT", MAX_DENSE_QUBITS),
            distance=get_int("LATSURG_DISTANCE", 2),
            trn_count=get_int("LATSURG_TRN_COUNT", 1),
            grid=get_optional("LATSURG_GRID", "auto"),
        )
