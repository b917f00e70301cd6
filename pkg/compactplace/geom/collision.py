"""
Separating-Axis Overlap Test.

Two convex polygons overlap when their projections overlap on every edge
normal of both. The smallest projection overlap is the penetration depth;
polygons count as overlapping only when it exceeds the touch tolerance,
so shared boundaries are contact, not collision.
"""

from __future__ import annotations

import numpy as np

from compactplace.geom.polygon import world_coords
from compactplace.models.geometry import ConvexPolygon, Pose2

EPS_TOUCH = 0.1


def _edge_normals(coords: np.ndarray) -> np.ndarray:
    edges = np.roll(coords, -1, axis=0) - coords
    normals = np.column_stack([-edges[:, 1], edges[:, 0]])
    return normals / np.hypot(normals[:, 0], normals[:, 1])[:, None]


def coords_penetration_depth(a: np.ndarray, b: np.ndarray) -> float:
    """
    Minimum projection overlap of two convex vertex rings in world frame.

    Negative values are the width of the widest separating gap found on
    the tested axes.
    """
    axes = np.vstack([_edge_normals(a), _edge_normals(b)])
    pa = a @ axes.T
    pb = b @ axes.T
    depth = np.minimum(pa.max(axis=0) - pb.min(axis=0), pb.max(axis=0) - pa.min(axis=0))
    return float(depth.min())


def penetration_depth(
    a: ConvexPolygon, pose_a: Pose2, b: ConvexPolygon, pose_b: Pose2
) -> float:
    """Penetration depth of two placed polygons (see coords_penetration_depth)."""
    return coords_penetration_depth(world_coords(a, pose_a), world_coords(b, pose_b))


def coords_overlap(a: np.ndarray, b: np.ndarray, eps_touch: float = EPS_TOUCH) -> bool:
    """Overlap test on world-frame vertex rings."""
    # cheap box rejection before projecting on every axis
    if (
        a[:, 0].max() - b[:, 0].min() <= eps_touch
        or b[:, 0].max() - a[:, 0].min() <= eps_touch
        or a[:, 1].max() - b[:, 1].min() <= eps_touch
        or b[:, 1].max() - a[:, 1].min() <= eps_touch
    ):
        return False
    return coords_penetration_depth(a, b) > eps_touch


def overlap(
    a: ConvexPolygon,
    pose_a: Pose2,
    b: ConvexPolygon,
    pose_b: Pose2,
    eps_touch: float = EPS_TOUCH,
) -> bool:
    """
    Whether two placed convex polygons interpenetrate by more than ``eps_touch``.

    Example:
        >>> sq = ConvexPolygon.rectangle(-50, -50, 50, 50)
        >>> overlap(sq, Pose2(0, 0), sq, Pose2(100, 0))
        False
        >>> overlap(sq, Pose2(0, 0), sq, Pose2(99, 0))
        True
    """
    return coords_overlap(world_coords(a, pose_a), world_coords(b, pose_b), eps_touch)
