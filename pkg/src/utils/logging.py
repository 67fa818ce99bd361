"""Logging setup for the lattice-surgery toolkit.

Every module logs through a child of the ``lattice_surgery`` logger, so one
handler on the parent covers the whole package.
"""

import logging
import os
import sys

LOGGER_NAME = "lattice_surgery"
LOG_FORMAT = "%(asctime)s %(levelname)-8s %(name)s: %(message)s"
DATE_FORMAT = "%H:%M:%S"


def setup_logging(level: str | None = None) -> logging.Logger:
    """Configure the toolkit logger.

    Args:
        level: Level name such as ``"DEBUG"``; when omitted the LOG_LEVEL
            environment variable is read (default: INFO)

    Records go to stderr so that stdout stays machine-readable.

    Returns:
        Configured parent logger
    """
    logger = logging.getLogger(LOGGER_NAME)

    level_name = (level or os.getenv("LOG_LEVEL", "INFO")).upper()
    logger.setLevel(getattr(logging, level_name, logging.INFO))

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))

    logger.handlers.clear()
    logger.addHandler(handler)
    logger.propagate = False

    return logger


def get_logger(module: str | None = None) -> logging.Logger:
    """Logger for a package module, configuring the parent on first use.

    Args:
        module: Dotted module name, usually ``__name__``; the leading
            ``src.`` is dropped, so ``src.services.surgery`` logs as
            ``lattice_surgery.services.surgery``
    """
    parent = logging.getLogger(LOGGER_NAME)
    if not parent.handlers:
        setup_logging()
    if not module:
        return parent
    suffix = module.removeprefix("src.").removeprefix("src")
    return parent.getChild(suffix) if suffix and suffix != "__main__" else parent
