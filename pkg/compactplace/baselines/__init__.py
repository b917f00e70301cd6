"""
Scripted Baselines.

This module provides the two scripted planners and the executor that
runs their plans:
- Gripper footprints reserving the space a placement needs
- Uniform layout scaling
- Footprint shifting
- Kinematic hover-descend-release-retract execution
"""

from compactplace.baselines.footprint import (
    DEFAULT_SAFETY_MARGIN,
    GripperFootprint,
    gripper_footprint,
)
from compactplace.baselines.plan import (
    PLAN_VERSION,
    PlacementPlan,
    PlanTarget,
    grasp_yaws,
    load_plan,
    save_plan,
)
from compactplace.baselines.bl1 import (
    DEFAULT_ALPHA_B,
    DEFAULT_K_MAX,
    bl1_plan,
    footprints_clear,
    layout_centroid,
    scaled_poses,
)
from compactplace.baselines.bl2 import (
    DEFAULT_INCREMENT,
    MAX_SHIFTS,
    bl2_movement_vector,
    bl2_plan,
)
from compactplace.baselines.executor import HOVER_HEIGHT, execute_plan

__all__ = [
    # Footprints
    "DEFAULT_SAFETY_MARGIN",
    "GripperFootprint",
    "gripper_footprint",
    # Plans
    "PLAN_VERSION",
    "PlanTarget",
    "PlacementPlan",
    "save_plan",
    "load_plan",
    "grasp_yaws",
    # Scaling
    "DEFAULT_ALPHA_B",
    "DEFAULT_K_MAX",
    "layout_centroid",
    "scaled_poses",
    "footprints_clear",
    "bl1_plan",
    # Shifting
    "DEFAULT_INCREMENT",
    "MAX_SHIFTS",
    "bl2_movement_vector",
    "bl2_plan",
    # Execution
    "HOVER_HEIGHT",
    "execute_plan",
]
