"""
Evaluation.

This module provides the assembly metrics, the sources that assemble
layouts (policies, scripted plans, the identity oracle), the suite runner
writing per-layout and summary reports, and the reference comparison.
"""

from compactplace.evaluation.metrics import (
    BoundingBoxReading,
    DistanceReading,
    collision_rate,
    metric_angle_diff,
    metric_bb_increase,
    metric_collision_rate,
    metric_mean_object_distance,
    registered_poses,
)
from compactplace.evaluation.sources import (
    OracleSource,
    PlanSource,
    PolicySource,
    episode_seed,
)
from compactplace.evaluation.suite import (
    SCORE_COLUMNS,
    THREADS_ENV,
    LayoutScore,
    aggregate,
    evaluate_suite,
    score_assembly,
    worker_count,
)
from compactplace.evaluation.reference import REFERENCE_TABLE, format_reference_comparison

__all__ = [
    # Metrics
    "BoundingBoxReading",
    "DistanceReading",
    "registered_poses",
    "metric_bb_increase",
    "metric_mean_object_distance",
    "metric_angle_diff",
    "collision_rate",
    "metric_collision_rate",
    # Sources
    "episode_seed",
    "PolicySource",
    "PlanSource",
    "OracleSource",
    # Suite
    "THREADS_ENV",
    "SCORE_COLUMNS",
    "LayoutScore",
    "worker_count",
    "score_assembly",
    "aggregate",
    "evaluate_suite",
    # Reference
    "REFERENCE_TABLE",
    "format_reference_comparison",
]
