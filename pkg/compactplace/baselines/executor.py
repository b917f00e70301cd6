"""
Kinematic Plan Executor.

Each target is executed as hover, vertical descent, release and vertical
retract. Contacts are checked after every motion step with the
environment's contact checks; a fragment whose descent hits something is
left in the gripper and recorded as a collision.
"""

from __future__ import annotations

import logging

from compactplace.baselines.plan import PlacementPlan, PlanTarget
from compactplace.env.collisions import check_collisions
from compactplace.env.config import EnvConfig
from compactplace.env.curriculum import CurriculumState
from compactplace.env.placement_env import grasp_extents
from compactplace.models.assembly import AssemblyResult
from compactplace.models.episode import ContactType, EEState, EnvState, GraspState, TaskState
from compactplace.models.geometry import Pose2, wrap_angle
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)

HOVER_HEIGHT = 30.0


def _place_one(
    target: PlanTarget,
    layout: Layout,
    table_poses: dict[int, Pose2],
    config: EnvConfig,
    retract_height: float,
) -> ContactType | None:
    fragment = layout.fragment(target.fragment_id)
    gripper = config.gripper
    pose = target.pose
    ee_theta = wrap_angle(pose.theta - target.grasp_yaw)
    u_min, u_max = grasp_extents(fragment.shape.coords, target.grasp_yaw)
    state = EnvState(
        q=TaskState.PLACE,
        ee=EEState(pose.x, pose.y, HOVER_HEIGHT + gripper.rest_height, ee_theta),
        placing_id=fragment.id,
        placing_pose=pose,
        object_bottom=HOVER_HEIGHT,
        table_poses=table_poses,
        grasp=GraspState(target.grasp_yaw, u_min, u_max),
    )

    def contact() -> ContactType | None:
        found = check_collisions(state, layout, config)
        return found[0] if found else None

    hit = contact()
    while hit is None and state.object_bottom > 0.0:
        state.object_bottom = max(0.0, state.object_bottom - config.translation_step)
        state.ee = EEState(
            pose.x, pose.y, state.object_bottom + gripper.rest_height, ee_theta
        )
        hit = contact()
    if hit is not None:
        return hit

    table_poses[fragment.id] = pose
    state.q = TaskState.RETRACT
    state.ee = EEState(state.ee.x, state.ee.y, state.ee.z, ee_theta, gripper_open=True)
    goal = state.ee.z + retract_height
    hit = contact()
    while hit is None and state.ee.z < goal:
        z = min(goal, state.ee.z + config.translation_step)
        state.ee = EEState(pose.x, pose.y, z, ee_theta, gripper_open=True)
        hit = contact()
    return hit


def execute_plan(
    plan: PlacementPlan,
    layout: Layout,
    config: EnvConfig | None = None,
    stop_on_collision: bool = False,
) -> AssemblyResult:
    """
    Execute a plan kinematically.

    Args:
        plan: Targets in placement order.
        layout: Layout the plan belongs to.
        config: Environment settings (gripper, step size, touch tolerance).
        stop_on_collision: Skip the remaining targets after the first contact.

    Returns:
        Final poses, collision events and per-fragment success flags.
        Collisions are recorded, never raised.
    """
    config = config or EnvConfig()
    retract_height = CurriculumState.at_level(0, config.curriculum).retract_height
    result = AssemblyResult(layout_id=layout.layout_id, agent=plan.kind, metadata=dict(plan.metadata))
    table_poses: dict[int, Pose2] = {}
    for target in plan.targets:
        result.placement_order.append(target.fragment_id)
        hit = _place_one(target, layout, table_poses, config, retract_height)
        if target.fragment_id in table_poses:
            result.placed_poses[target.fragment_id] = table_poses[target.fragment_id]
        if hit is not None:
            logger.debug("fragment %d of %s hit %s", target.fragment_id, layout.layout_id, hit.value)
            result.collision_events.append((target.fragment_id, hit))
            result.success[target.fragment_id] = False
            if stop_on_collision:
                break
        else:
            result.success[target.fragment_id] = True
    return result
