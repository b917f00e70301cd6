"""
Compactplace API.

Compactplace trains and evaluates a robot placement policy that assembles
convex fragments into a compact arrangement matching a target layout.

.. code:: python

    from compactplace import GeneratorConfig, OracleSource, evaluate_suite, generate_layout

    layout = generate_layout(GeneratorConfig(seed=7))
    report, results = evaluate_suite(OracleSource(), [layout])

The main pieces are:
- :py:func:`generate_layout` and :py:func:`extract_sequence` for layouts
- :py:class:`PlacementEnv`, the single-fragment placement environment
- :py:class:`TQCAgent` and :py:class:`Trainer` for the learned policy
- :py:func:`bl1_plan` and :py:func:`bl2_plan`, the scripted baselines
- :py:func:`evaluate_suite` with the metric functions for scoring

All the logging is handled through the builtin Python `logging` module;
:py:func:`setup_compactplace_logging` installs the stderr handler.
The ``compactplace`` command lives in :py:mod:`compactplace.cli`.
"""

from __future__ import annotations

# Core infrastructure
from compactplace.core.exceptions import (
    CompactPlaceError,
    ConfigError,
    GeometryError,
    LayoutFormatError,
    LayoutInvariantError,
)
from compactplace.core.events import EventBus, EventPriority, StepEvent, EpisodeEndEvent
from compactplace.core.observer import HasObservers
from compactplace.logs.handlers import setup_compactplace_logging

# Data models
from compactplace.models.geometry import ConvexPolygon, Point2, Pose2, ReferenceLine
from compactplace.models.layout import Fragment, GeneratorConfig, Layout
from compactplace.models.assembly import AgentTag, AssemblyResult, MetricReport

# Layouts
from compactplace.dataset.generator import generate_layout
from compactplace.dataset.sequence import extract_sequence
from compactplace.dataset.storage import load_layout, save_layout

# Environment
from compactplace.env.config import EnvConfig, GripperModel, RewardConfig
from compactplace.env.placement_env import PlacementEnv

# Learner
from compactplace.agent.config import TrainConfig
from compactplace.agent.tqc import TQCAgent
from compactplace.agent.trainer import Trainer
from compactplace.agent.checkpoint import load_checkpoint, save_checkpoint

# Baselines
from compactplace.baselines.bl1 import bl1_plan
from compactplace.baselines.bl2 import bl2_plan
from compactplace.baselines.executor import execute_plan

# Evaluation
from compactplace.evaluation.sources import OracleSource, PlanSource, PolicySource
from compactplace.evaluation.suite import evaluate_suite

__version__ = "1.0.0"

__all__ = [
    # Core
    "CompactPlaceError",
    "ConfigError",
    "GeometryError",
    "LayoutFormatError",
    "LayoutInvariantError",
    "EventBus",
    "EventPriority",
    "StepEvent",
    "EpisodeEndEvent",
    "HasObservers",
    "setup_compactplace_logging",
    # Models
    "ConvexPolygon",
    "Point2",
    "Pose2",
    "ReferenceLine",
    "Fragment",
    "GeneratorConfig",
    "Layout",
    "AgentTag",
    "AssemblyResult",
    "MetricReport",
    # Layouts
    "generate_layout",
    "extract_sequence",
    "load_layout",
    "save_layout",
    # Environment
    "EnvConfig",
    "GripperModel",
    "RewardConfig",
    "PlacementEnv",
    # Learner
    "TrainConfig",
    "TQCAgent",
    "Trainer",
    "load_checkpoint",
    "save_checkpoint",
    # Baselines
    "bl1_plan",
    "bl2_plan",
    "execute_plan",
    # Evaluation
    "OracleSource",
    "PlanSource",
    "PolicySource",
    "evaluate_suite",
]
