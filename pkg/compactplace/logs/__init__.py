"""
Logging Module.

This module provides logging utilities and handlers.
"""

from compactplace.logs.handlers import (
    StderrHandler,
    get_compactplace_logger,
    get_progress_logger,
    setup_compactplace_logging,
)

__all__ = [
    "StderrHandler",
    "setup_compactplace_logging",
    "get_compactplace_logger",
    "get_progress_logger",
]
