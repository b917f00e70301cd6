"""
Exception Classes.

This module defines the exception hierarchy used throughout compactplace.
Every error carries the process exit code the command line reports for it.
"""

from __future__ import annotations

from typing import Any


class CompactPlaceError(Exception):
    """
    Base class for compactplace related exceptions.

    :param message: Message string describing the exception
    """

    exit_code = 3


class ConfigError(CompactPlaceError):
    """
    Raised when a configuration value is invalid.

    The message always names the offending field, e.g.
    ``reward.alpha_c must be >= 0``.
    """

    exit_code = 1


class GeometryError(CompactPlaceError):
    """
    Raised for invalid geometric input.

    This covers:
    - Non-finite coordinates
    - Polygons that are not strictly convex or not counter-clockwise
    - Degenerate offsets (near-parallel adjacent edges)
    - Empty inputs where at least one element is required
    """

    exit_code = 2


class LayoutFormatError(CompactPlaceError):
    """Raised when a layout or plan file is malformed or has the wrong version."""

    exit_code = 2


class LayoutInvariantError(CompactPlaceError):
    """Raised when a layout violates one of its structural invariants."""

    exit_code = 2


class LayoutGenerationError(CompactPlaceError):
    """Raised when the generator rejects too many consecutive attempts."""


class CheckpointError(CompactPlaceError):
    """Raised for corrupted checkpoints and version or shape mismatches."""

    exit_code = 2


class EpisodeError(CompactPlaceError):
    """Raised for misuse of the placement environment (e.g. step after done)."""


class PlannerError(CompactPlaceError):
    """Raised when a baseline planner cannot produce a plan."""


class TrainingError(CompactPlaceError):
    """
    Raised when a gradient update produces a non-finite loss.

    Attributes:
        diagnostics: Loss values and temperature at the failing update.
    """

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
