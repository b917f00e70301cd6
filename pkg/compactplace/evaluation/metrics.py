"""
Assembly Metrics.

Placed assemblies are compared with their layout after a translation
that puts the first placed fragment's centroid on its layout centroid.
Rotation is not registered.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Iterable

import numpy as np

from compactplace.core.exceptions import GeometryError
from compactplace.geom.polygon import angle_difference, bounding_box, box_area
from compactplace.models.assembly import AssemblyResult
from compactplace.models.geometry import Pose2
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)


class BoundingBoxReading(str, Enum):
    """
    Readings of the bounding-box increase.

    Attributes:
        UNION: Box of all placed fragments against the layout's box.
        PER_FRAGMENT_SUM: Sum of the placed fragments' own boxes against
            the layout's box.
    """

    UNION = "union"
    PER_FRAGMENT_SUM = "per_fragment_sum"


class DistanceReading(str, Enum):
    """
    Readings of the mean object distance.

    Attributes:
        EXCESS: Nearest-centroid distance in excess of the layout's own.
        RAW: Nearest-centroid distance of the placed assembly.
    """

    EXCESS = "excess"
    RAW = "raw"


def registered_poses(result: AssemblyResult, layout: Layout) -> dict[int, Pose2]:
    """Placed poses translated so the first placed fragment sits at its layout position."""
    order = [fid for fid in result.placement_order if fid in result.placed_poses]
    order += sorted(fid for fid in result.placed_poses if fid not in order)
    if not order:
        return {}
    anchor = order[0]
    target = layout.fragment(anchor).layout_pose
    placed = result.placed_poses[anchor]
    dx, dy = target.x - placed.x, target.y - placed.y
    return {fid: p.translated(dx, dy) for fid, p in result.placed_poses.items()}


def _require_placed(result: AssemblyResult, minimum: int) -> None:
    if len(result.placed_poses) < minimum:
        raise GeometryError(
            f"{result.layout_id}: metric needs {minimum} placed fragments, "
            f"got {len(result.placed_poses)}"
        )


def metric_bb_increase(
    result: AssemblyResult,
    layout: Layout,
    variant: BoundingBoxReading = BoundingBoxReading.UNION,
) -> float:
    """
    Bounding-box increase in percent.

    Raises:
        GeometryError: Without placed fragments.
    """
    _require_placed(result, 1)
    poses = registered_poses(result, layout)
    a_layout = box_area(bounding_box((f.shape, f.layout_pose) for f in layout.fragments))
    if variant == BoundingBoxReading.PER_FRAGMENT_SUM:
        a_placed = sum(
            box_area(bounding_box([(layout.fragment(fid).shape, pose)])) for fid, pose in poses.items()
        )
    else:
        a_placed = box_area(bounding_box((layout.fragment(fid).shape, p) for fid, p in poses.items()))
    return 100.0 * (a_placed - a_layout) / a_layout


def _nearest_distances(centers: np.ndarray) -> np.ndarray:
    d = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1)


def metric_mean_object_distance(
    result: AssemblyResult,
    layout: Layout,
    variant: DistanceReading = DistanceReading.EXCESS,
) -> float:
    """
    Mean nearest-centroid distance of the placed fragments in mm.

    The excess reading subtracts each fragment's nearest-centroid distance
    in the layout, computed over the same placed set.

    Raises:
        GeometryError: With fewer than two placed fragments.
    """
    _require_placed(result, 2)
    ids = sorted(result.placed_poses)
    placed = np.array([[result.placed_poses[i].x, result.placed_poses[i].y] for i in ids])
    nearest = _nearest_distances(placed)
    if variant == DistanceReading.RAW:
        return float(nearest.mean())
    reference = np.array([[layout.fragment(i).layout_pose.x, layout.fragment(i).layout_pose.y] for i in ids])
    return float((nearest - _nearest_distances(reference)).mean())


def metric_angle_diff(result: AssemblyResult, layout: Layout) -> float:
    """
    Mean absolute heading error in degrees.

    Example:
        Layout heading 10 and placed heading 350 differ by 20.
    """
    _require_placed(result, 1)
    diffs = [
        angle_difference(pose.theta, layout.fragment(fid).layout_pose.theta)
        for fid, pose in result.placed_poses.items()
    ]
    return float(np.mean(diffs))


def collision_rate(result: AssemblyResult) -> float:
    """Share of one assembly's placement episodes that ended in contact, in percent."""
    if result.episodes == 0:
        return 0.0
    return 100.0 * len(result.collided_ids) / result.episodes


def metric_collision_rate(results: Iterable[AssemblyResult]) -> float:
    """Share of placement episodes ending in contact across a suite, in percent."""
    episodes = collided = 0
    for r in results:
        episodes += r.episodes
        collided += len(r.collided_ids)
    if episodes == 0:
        return 0.0
    return 100.0 * collided / episodes
