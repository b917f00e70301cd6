"""
Placement Environment.

This module provides the kinematic environment the placement agent is
trained in:
- Configuration: reward factors, gripper geometry, curriculum bounds
- Constraint distances and reward terms
- Contact checks and the 58-entry observation
- The start-height curriculum
- Episode trace export
"""

from compactplace.env.config import (
    CurriculumConfig,
    EnvConfig,
    GripperModel,
    RewardConfig,
)
from compactplace.env.curriculum import CurriculumState, curriculum_update
from compactplace.env.constraints import (
    angle_error,
    corner_displacements,
    corner_distance_dc,
    drop_height,
    line_displacements,
    line_distance_dl,
    placed_neighbors,
)
from compactplace.env.rewards import (
    reward_collision,
    reward_q1,
    reward_release,
    reward_retract,
)
from compactplace.env.collisions import check_collisions
from compactplace.env.observation import OBS_SIZE, build_observation, workspace_bounds
from compactplace.env.placement_env import ACTION_SIZE, PlacementEnv, grasp_extents
from compactplace.env.trace import TRACE_COLUMNS, EpisodeTraceRecorder

__all__ = [
    # Config
    "RewardConfig",
    "GripperModel",
    "CurriculumConfig",
    "EnvConfig",
    # Curriculum
    "CurriculumState",
    "curriculum_update",
    # Constraints
    "placed_neighbors",
    "corner_displacements",
    "corner_distance_dc",
    "line_displacements",
    "line_distance_dl",
    "drop_height",
    "angle_error",
    # Rewards
    "reward_q1",
    "reward_release",
    "reward_retract",
    "reward_collision",
    # Episode
    "check_collisions",
    "OBS_SIZE",
    "ACTION_SIZE",
    "build_observation",
    "workspace_bounds",
    "grasp_extents",
    "PlacementEnv",
    "TRACE_COLUMNS",
    "EpisodeTraceRecorder",
]
