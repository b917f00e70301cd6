"""
Logging Handlers.

This module provides the stderr handler and logger setup for compactplace.
"""

from __future__ import annotations

import logging
import sys

PROGRESS_LOGGER = "compactplace.progress"


class StderrHandler(logging.Handler):
    """
    A logging handler that prints to stderr.

    This handler is used for training/evaluation progress lines and
    command-line diagnostics.
    """

    def __init__(self) -> None:
        super().__init__()
        self.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))

    def emit(self, record: logging.LogRecord) -> None:
        """Emit a log record to stderr."""
        try:
            msg = self.format(record)
            print(msg, file=sys.stderr)
        except Exception:
            self.handleError(record)


def setup_compactplace_logging(
    level: int = logging.INFO,
    progress_level: int = logging.INFO,
) -> None:
    """
    Set up compactplace logging.

    Args:
        level: Log level for the compactplace logger
        progress_level: Log level for progress lines
    """
    root = logging.getLogger("compactplace")
    root.setLevel(level)
    if not any(isinstance(h, StderrHandler) for h in root.handlers):
        root.addHandler(StderrHandler())

    progress = logging.getLogger(PROGRESS_LOGGER)
    progress.setLevel(progress_level)


def get_compactplace_logger() -> logging.Logger:
    """Get the main compactplace logger."""
    return logging.getLogger("compactplace")


def get_progress_logger() -> logging.Logger:
    """Get the progress message logger."""
    return logging.getLogger(PROGRESS_LOGGER)
