"""
Footprint Shifting Planner.

Each fragment starts next to its sequence predecessor, offset as in the
layout, and is pushed away from every overlapping footprint in small
increments until its own footprint is clear.
"""

from __future__ import annotations

import logging
from typing import Mapping, Sequence

import numpy as np

from compactplace.baselines.footprint import DEFAULT_SAFETY_MARGIN, gripper_footprint
from compactplace.baselines.plan import PlacementPlan, PlanTarget, grasp_yaws
from compactplace.core.exceptions import PlannerError
from compactplace.env.config import GripperModel
from compactplace.geom.collision import EPS_TOUCH, coords_overlap
from compactplace.geom.polygon import centroid_world, world_coords
from compactplace.models.assembly import AgentTag
from compactplace.models.geometry import EPS_VERTEX, Pose2
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)

DEFAULT_INCREMENT = 2.0
MAX_SHIFTS = 10_000
JITTER_DEG = 1.0


def bl2_movement_vector(
    c_p: Sequence[float], colliders: Sequence[Sequence[float]], increment: float
) -> np.ndarray:
    """
    Push direction of a footprint: ``increment`` times the sum of unit
    vectors pointing from each collider centroid to the footprint centroid.

    Example:
        >>> bl2_movement_vector((1, 0), [(0, 0)], 0.01)
        array([0.01, 0.  ])

    Raises:
        PlannerError: Without colliders, or when a collider centroid
            coincides with ``c_p``.
    """
    if len(colliders) == 0:
        raise PlannerError("movement vector needs at least one collider")
    c_p = np.asarray(c_p, dtype=float)
    total = np.zeros(2)
    for c in colliders:
        d = c_p - np.asarray(c, dtype=float)
        norm = float(np.hypot(d[0], d[1]))
        if norm < EPS_VERTEX:
            raise PlannerError(f"footprint centroid coincides with collider centroid {tuple(c)}")
        total += d / norm
    return increment * total


def _rotate(v: np.ndarray, degrees: float) -> np.ndarray:
    rad = np.deg2rad(degrees)
    c, s = np.cos(rad), np.sin(rad)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def bl2_plan(
    layout: Layout,
    gripper: GripperModel | None = None,
    safety_margin: float = DEFAULT_SAFETY_MARGIN,
    increment: float = DEFAULT_INCREMENT,
    yaws: Mapping[int, float] | None = None,
    seed: int = 0,
    eps_touch: float = EPS_TOUCH,
    max_shifts: int = MAX_SHIFTS,
) -> PlacementPlan:
    """
    Sequentially shift each fragment until its footprint is clear.

    A footprint is tested against the footprints reserved by the fragments
    placed before it; those contain the placed fragments themselves. When
    the pushes cancel out, or a centroid coincides with a collider's, the
    fragment moves sideways by ``increment`` in a direction jittered by up
    to one degree.

    Args:
        layout: Layout to assemble.
        gripper: Gripper geometry.
        safety_margin: Footprint inflation in mm.
        increment: Shift length per iteration in mm.
        yaws: Grasp yaw by fragment id; seeded defaults when omitted.
        seed: Seed of the jitter.
        eps_touch: Touch tolerance of the overlap test.
        max_shifts: Iteration cap per fragment.

    Returns:
        Plan with per-fragment shift counts in its metadata.

    Raises:
        PlannerError: If a fragment needs more than ``max_shifts`` shifts.
    """
    if increment <= 0:
        raise PlannerError(f"increment must be > 0, got {increment}")
    rng = np.random.default_rng(seed)
    yaws = dict(yaws) if yaws is not None else grasp_yaws(layout, seed)
    reserved: list[tuple[np.ndarray, np.ndarray]] = []
    poses: dict[int, Pose2] = {}
    shifts: dict[str, int] = {}
    jitters = 0

    for j, fid in enumerate(layout.sequence):
        fragment = layout.fragment(fid)
        footprint = gripper_footprint(fragment, yaws[fid], gripper, safety_margin).polygon
        if j == 0:
            pose = fragment.layout_pose
        else:
            pred = layout.sequence[j - 1]
            ref = layout.fragment(pred).layout_pose
            pose = Pose2(
                poses[pred].x + fragment.layout_pose.x - ref.x,
                poses[pred].y + fragment.layout_pose.y - ref.y,
                fragment.layout_pose.theta,
            )

        count = 0
        while True:
            coords = world_coords(footprint, pose)
            c_p = centroid_world(footprint, pose).as_array()
            colliders = [c for other, c in reserved if coords_overlap(coords, other, eps_touch)]
            if not colliders:
                break
            if count >= max_shifts:
                raise PlannerError(
                    f"{layout.layout_id}: fragment {fid} still overlaps after {max_shifts} shifts"
                )
            try:
                move = bl2_movement_vector(c_p, colliders, increment)
            except PlannerError:
                move = np.zeros(2)
            if np.hypot(move[0], move[1]) < 1e-9 * increment:
                base = c_p - colliders[0]
                norm = float(np.hypot(base[0], base[1]))
                base = base / norm if norm >= EPS_VERTEX else np.array([1.0, 0.0])
                move = increment * _rotate(base, 90.0 + rng.uniform(-JITTER_DEG, JITTER_DEG))
                jitters += 1
            pose = pose.translated(float(move[0]), float(move[1]))
            count += 1

        poses[fid] = pose
        shifts[str(fid)] = count
        reserved.append((world_coords(footprint, pose), centroid_world(footprint, pose).as_array()))

    logger.debug("%s planned with %d shifts", layout.layout_id, sum(shifts.values()))
    return PlacementPlan(
        kind=AgentTag.BL2,
        layout_id=layout.layout_id,
        targets=[PlanTarget(fid, poses[fid], yaws[fid]) for fid in layout.sequence],
        metadata={
            "shifts": shifts,
            "total_shifts": sum(shifts.values()),
            "jitters": jitters,
            "increment": increment,
            "safety_margin": safety_margin,
        },
    )
