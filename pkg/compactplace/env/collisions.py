"""
Contact Checks.

Contacts are detected geometrically: two bodies touch when their height
ranges overlap and their footprints interpenetrate by more than the touch
tolerance. The table plane is hit when a fingertip goes below z=0.
"""

from __future__ import annotations

import logging

from compactplace.env.config import EnvConfig
from compactplace.geom.collision import coords_overlap
from compactplace.geom.polygon import world_coords
from compactplace.models.episode import ContactType, EnvState, TaskState
from compactplace.models.geometry import Pose2
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)


def _placing_body(state: EnvState) -> tuple[Pose2, float] | None:
    # held object while placing, landed object once released
    if state.q == TaskState.PLACE:
        return state.placing_pose, state.object_bottom
    if state.q == TaskState.RETRACT and state.placing_id in state.table_poses:
        return state.table_poses[state.placing_id], 0.0
    return None


def check_collisions(state: EnvState, layout: Layout, config: EnvConfig) -> tuple[ContactType, ...]:
    """
    Contacts of the current state, highest priority first.

    Checks the placing object against the other table objects, held while
    placing and at its landed pose after release, the fingers against the
    table objects when their height ranges overlap, and the fingertips
    against the table plane.
    """
    eps = config.eps_touch
    gripper = config.gripper
    ee = state.ee
    contacts: set[ContactType] = set()

    table = [
        (tid, layout.fragment(tid), world_coords(layout.fragment(tid).shape, pose))
        for tid, pose in state.table_poses.items()
        if not (tid == state.placing_id and state.q == TaskState.PLACE)
    ]

    body = _placing_body(state)
    if body is not None:
        pose, bottom = body
        placing_coords = world_coords(layout.fragment(state.placing_id).shape, pose)
        for tid, frag, coords in table:
            if tid == state.placing_id:
                continue
            if bottom < frag.height - eps and coords_overlap(placing_coords, coords, eps):
                contacts.add(ContactType.OBJECT_TABLE_OBJECT)
                break

    fingertip_z = ee.z - gripper.finger_length
    fingers = gripper.finger_polygons(state.grasp.u_min, state.grasp.u_max, ee.gripper_open)
    if fingers:
        gripper_pose = Pose2(ee.x, ee.y, ee.theta)
        finger_coords = [world_coords(f, gripper_pose) for f in fingers]
        for _, frag, coords in table:
            if fingertip_z >= frag.height - eps:
                continue
            if any(coords_overlap(fc, coords, eps) for fc in finger_coords):
                contacts.add(ContactType.ROBOT_TABLE_OBJECT)
                break

    if fingertip_z < 0.0:
        contacts.add(ContactType.ROBOT_TABLE)

    return tuple(sorted(contacts, key=lambda c: c.priority))
