"""
Data Models.

This module provides the dataclasses shared across compactplace:
- Geometry: points, poses, segments, convex polygons
- Layouts: fragments, corner pairs, reference-line flags
- Episodes: environment state, actions, rewards, contacts
- Assemblies: per-layout results and metric reports
"""

from compactplace.models.geometry import (
    EPS_CONVEX,
    EPS_VERTEX,
    ConvexPolygon,
    Point2,
    Point3,
    Pose2,
    ReferenceLine,
    Segment2,
    wrap_angle,
)
from compactplace.models.layout import (
    MAX_NEIGHBORS,
    CornerPair,
    Fragment,
    GeneratorConfig,
    Layout,
    LineFlags,
    pair_key,
)
from compactplace.models.episode import (
    Action,
    ContactType,
    EEState,
    EnvState,
    GraspState,
    RewardBreakdown,
    StepInfo,
    TaskState,
)
from compactplace.models.assembly import (
    AgentTag,
    AssemblyResult,
    MetricReport,
    MetricSummary,
)

__all__ = [
    # Geometry
    "EPS_VERTEX",
    "EPS_CONVEX",
    "Point2",
    "Point3",
    "Pose2",
    "Segment2",
    "ConvexPolygon",
    "ReferenceLine",
    "wrap_angle",
    # Layout
    "MAX_NEIGHBORS",
    "GeneratorConfig",
    "Fragment",
    "CornerPair",
    "LineFlags",
    "Layout",
    "pair_key",
    # Episode
    "TaskState",
    "ContactType",
    "EEState",
    "Action",
    "GraspState",
    "EnvState",
    "RewardBreakdown",
    "StepInfo",
    # Assembly
    "AgentTag",
    "AssemblyResult",
    "MetricSummary",
    "MetricReport",
]
