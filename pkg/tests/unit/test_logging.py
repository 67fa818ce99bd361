"""Unit tests for the toolkit logger."""

import logging

import pytest

from src.utils.logging import DATE_FORMAT, LOG_FORMAT, LOGGER_NAME, get_logger, setup_logging


@pytest.fixture(autouse=True)
def restore_level():
    """Leave the shared logger at its original level."""
    logger = logging.getLogger(LOGGER_NAME)
    level = logger.level
    yield
    logger.setLevel(level)


class TestLogging:
    """Tests for setup_logging and get_logger."""

    def test_explicit_level_wins_over_environment(self, monkeypatch):
        """A level from Configuration overrides LOG_LEVEL."""
        monkeypatch.setenv("LOG_LEVEL", "ERROR")
        assert setup_logging("debug").level == logging.DEBUG

    def test_environment_level_used_by_default(self, monkeypatch):
        """Without an argument LOG_LEVEL is read."""
        monkeypatch.setenv("LOG_LEVEL", "WARNING")
        assert setup_logging().level == logging.WARNING

    def test_single_stderr_handler_with_project_format(self):
        """Repeated setup keeps one handler using the project format."""
        setup_logging()
        logger = setup_logging()
        (handler,) = logger.handlers
        assert handler.formatter._fmt == LOG_FORMAT
        assert handler.formatter.datefmt == DATE_FORMAT
        assert not logger.propagate

    def test_module_loggers_are_children(self):
        """src.* module names map under the toolkit logger."""
        assert get_logger("src.services.surgery").name == f"{LOGGER_NAME}.services.surgery"
        assert get_logger().name == LOGGER_NAME
        assert get_logger("__main__").name == LOGGER_NAME

    def test_module_records_reach_parent_handler(self):
        """Child records propagate to the configured parent."""
        seen = []

        class Collect(logging.Handler):
            def emit(self, record):
                seen.append(record)

        parent = setup_logging("INFO")
        parent.addHandler(Collect())
        get_logger("src.services.compiler").info("packed %d steps", 3)
        assert [r.getMessage() for r in seen] == ["packed 3 steps"]
        assert seen[0].name == f"{LOGGER_NAME}.services.compiler"
