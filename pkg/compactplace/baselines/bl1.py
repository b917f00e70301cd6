"""
Uniform Layout Scaling Planner.

The layout's positions are spread about the layout centroid by
increasing factors 1 + k * alpha_b until every fragment's gripper
footprint clears the fragments placed before it. Shapes and orientations
are left unchanged.
"""

from __future__ import annotations

import logging
from typing import Mapping

import numpy as np

from compactplace.baselines.footprint import DEFAULT_SAFETY_MARGIN, GripperFootprint, gripper_footprint
from compactplace.baselines.plan import PlacementPlan, PlanTarget, grasp_yaws
from compactplace.core.exceptions import PlannerError
from compactplace.env.config import GripperModel
from compactplace.geom.collision import EPS_TOUCH, coords_overlap
from compactplace.geom.polygon import world_coords
from compactplace.models.assembly import AgentTag
from compactplace.models.geometry import Pose2
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)

DEFAULT_ALPHA_B = 0.1
DEFAULT_K_MAX = 50


def layout_centroid(layout: Layout) -> np.ndarray:
    """Area-weighted centroid of the layout."""
    areas = np.array([f.area for f in layout.fragments])
    centers = np.array([[f.layout_pose.x, f.layout_pose.y] for f in layout.fragments])
    return (areas[:, None] * centers).sum(axis=0) / areas.sum()


def scaled_poses(layout: Layout, scale: float, center: np.ndarray | None = None) -> dict[int, Pose2]:
    """Layout poses with positions scaled about ``center``; orientations unchanged."""
    center = layout_centroid(layout) if center is None else center
    out = {}
    for f in layout.fragments:
        p = f.layout_pose
        x, y = center + scale * (np.array([p.x, p.y]) - center)
        out[f.id] = Pose2(float(x), float(y), p.theta)
    return out


def footprints_clear(
    layout: Layout,
    targets: list[PlanTarget],
    footprints: Mapping[int, GripperFootprint],
    eps_touch: float = EPS_TOUCH,
) -> bool:
    """Whether each footprint, in order, clears every fragment placed before it."""
    placed: list[np.ndarray] = []
    for target in targets:
        fp = world_coords(footprints[target.fragment_id].polygon, target.pose)
        if any(coords_overlap(fp, other, eps_touch) for other in placed):
            return False
        placed.append(world_coords(layout.fragment(target.fragment_id).shape, target.pose))
    return True


def bl1_plan(
    layout: Layout,
    alpha_b: float = DEFAULT_ALPHA_B,
    gripper: GripperModel | None = None,
    yaws: Mapping[int, float] | None = None,
    safety_margin: float = DEFAULT_SAFETY_MARGIN,
    k_max: int = DEFAULT_K_MAX,
    eps_touch: float = EPS_TOUCH,
) -> PlacementPlan:
    """
    Smallest uniform scaling whose sequential placement is clear.

    Args:
        layout: Layout to spread.
        alpha_b: Scale increment per iteration.
        gripper: Gripper geometry.
        yaws: Grasp yaw by fragment id; seeded defaults when omitted.
        safety_margin: Footprint inflation in mm.
        k_max: Largest scale index tried.
        eps_touch: Touch tolerance of the overlap test.

    Returns:
        Plan with metadata ``k``, ``scale`` and ``alpha_b``.

    Raises:
        PlannerError: If no k up to ``k_max`` is clear.
    """
    if alpha_b <= 0:
        raise PlannerError(f"alpha_b must be > 0, got {alpha_b}")
    yaws = dict(yaws) if yaws is not None else grasp_yaws(layout)
    footprints = {
        f.id: gripper_footprint(f, yaws[f.id], gripper, safety_margin) for f in layout.fragments
    }
    center = layout_centroid(layout)
    for k in range(1, k_max + 1):
        scale = 1.0 + k * alpha_b
        poses = scaled_poses(layout, scale, center)
        targets = [PlanTarget(fid, poses[fid], yaws[fid]) for fid in layout.sequence]
        if footprints_clear(layout, targets, footprints, eps_touch):
            logger.debug("%s clear at k=%d", layout.layout_id, k)
            return PlacementPlan(
                kind=AgentTag.BL1,
                layout_id=layout.layout_id,
                targets=targets,
                metadata={"k": k, "scale": scale, "alpha_b": alpha_b},
            )
    raise PlannerError(f"{layout.layout_id}: no clear scaling up to k={k_max}")
