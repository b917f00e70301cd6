"""
Core Infrastructure.

This module provides the foundational components used throughout compactplace:
- Exception classes
- Observer pattern implementation
- Event bus for episode events
- Protocol/type definitions
"""

from compactplace.core.exceptions import (
    CheckpointError,
    CompactPlaceError,
    ConfigError,
    EpisodeError,
    GeometryError,
    LayoutFormatError,
    LayoutGenerationError,
    LayoutInvariantError,
    PlannerError,
    TrainingError,
)
from compactplace.core.observer import HasObservers
from compactplace.core.events import EpisodeEndEvent, EventBus, EventPriority, StepEvent
from compactplace.core.types import PlacementSource, Policy

__all__ = [
    # Exceptions
    "CompactPlaceError",
    "ConfigError",
    "GeometryError",
    "LayoutFormatError",
    "LayoutInvariantError",
    "LayoutGenerationError",
    "CheckpointError",
    "EpisodeError",
    "PlannerError",
    "TrainingError",
    # Observer
    "HasObservers",
    # Events
    "EventBus",
    "EventPriority",
    "StepEvent",
    "EpisodeEndEvent",
    # Types
    "Policy",
    "PlacementSource",
]
