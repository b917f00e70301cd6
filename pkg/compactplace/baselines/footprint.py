"""
Gripper Footprints.

A footprint is the floor area a placement reserves: the object together
with the space the open and closed fingers and the palm need around it,
hulled and inflated by a safety margin. Footprints are expressed in the
object's local frame, so they are placed with the object's pose.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from compactplace.env.config import GripperModel
from compactplace.env.placement_env import grasp_extents
from compactplace.geom.polygon import convex_hull, offset
from compactplace.models.geometry import ConvexPolygon, Pose2
from compactplace.models.layout import Fragment

logger = logging.getLogger(__name__)

DEFAULT_SAFETY_MARGIN = 3.0


@dataclass(frozen=True)
class GripperFootprint:
    """
    Reserved floor area of one placement.

    Attributes:
        polygon: Footprint in the object's local frame.
        grasp_yaw: Object yaw relative to the gripper in degrees.
    """

    polygon: ConvexPolygon
    grasp_yaw: float

    def __str__(self) -> str:
        return f"{self.__class__.__name__}:vertices={len(self.polygon)},grasp_yaw={self.grasp_yaw}"


def gripper_footprint(
    fragment: Fragment,
    grasp_yaw: float,
    gripper: GripperModel | None = None,
    safety_margin: float = DEFAULT_SAFETY_MARGIN,
) -> GripperFootprint:
    """
    Footprint of a fragment grasped at ``grasp_yaw``.

    Args:
        fragment: Fragment to grasp.
        grasp_yaw: Object yaw minus gripper yaw in degrees.
        gripper: Gripper geometry.
        safety_margin: Outward offset of the hull in mm.

    Raises:
        GeometryError: If the offset degenerates.
    """
    gripper = gripper or GripperModel()
    coords = fragment.shape.coords
    u_min, u_max = grasp_extents(coords, grasp_yaw)
    # gripper frame -> object frame
    to_object = Pose2(0.0, 0.0, -grasp_yaw)
    ops = to_object.apply(gripper.operation_points(u_min, u_max))
    hull = convex_hull(np.vstack([coords, ops]))
    return GripperFootprint(offset(hull, safety_margin), grasp_yaw)
