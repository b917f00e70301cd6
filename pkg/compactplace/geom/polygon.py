"""
Polygon Operations.

This module provides area, centroid, transform, offset, hull and
bounding-box operations on convex polygons.
"""

from __future__ import annotations

import logging
from typing import Iterable

import numpy as np
from shapely.geometry import MultiPoint, Polygon

from compactplace.core.exceptions import GeometryError
from compactplace.models.geometry import (
    ConvexPolygon,
    Point2,
    Pose2,
    ring_centroid,
    ring_signed_area,
    wrap_angle,
)

logger = logging.getLogger(__name__)

_PARALLEL_SIN = 1e-12

PlacedPolygon = tuple[ConvexPolygon, Pose2]


def area(poly: ConvexPolygon) -> float:
    """
    Shoelace area of a polygon in mm^2.

    Example:
        >>> area(ConvexPolygon.rectangle(-50, -50, 50, 50))
        10000.0
    """
    return ring_signed_area(poly.coords)


def polygon_centroid(poly: ConvexPolygon) -> Point2:
    """Area centroid in the polygon's local frame."""
    return Point2.from_array(ring_centroid(poly.coords))


def world_coords(poly: ConvexPolygon, pose: Pose2) -> np.ndarray:
    """Vertices of ``poly`` placed at ``pose`` as an (n, 2) array."""
    return pose.apply(poly.coords)


def centroid_world(poly: ConvexPolygon, pose: Pose2) -> Point2:
    """Area-weighted centroid of ``poly`` transformed by ``pose``."""
    local = ring_centroid(poly.coords)
    return Point2.from_array(pose.apply(local[None, :])[0])


def offset(poly: ConvexPolygon, delta: float) -> ConvexPolygon:
    """
    Outward edge offset of a convex polygon.

    Each edge is translated outward by ``delta`` along its normal and
    neighboring edges are rejoined at their line intersection. The result
    stays in the input's local frame.

    Args:
        poly: Polygon to inflate.
        delta: Offset distance in millimeters (>= 0).

    Returns:
        The inflated polygon; ``poly`` itself when ``delta`` is 0.

    Raises:
        GeometryError: If ``delta`` is negative or two adjacent edges are
            parallel to numerical precision.
    """
    if delta < 0:
        raise GeometryError(f"offset distance must be >= 0, got {delta}")
    if delta == 0:
        return poly

    coords = poly.coords
    edges = np.roll(coords, -1, axis=0) - coords
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    dirs = edges / lengths[:, None]
    # outward normal of a CCW ring is the edge direction turned clockwise
    normals = np.column_stack([dirs[:, 1], -dirs[:, 0]])
    starts = coords + delta * normals

    n = len(coords)
    out = np.empty_like(coords)
    for i in range(n):
        j = i - 1
        d1, d2 = dirs[j], dirs[i]
        denom = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(denom) < _PARALLEL_SIN:
            raise GeometryError(f"offset is degenerate at vertex {i}: adjacent edges are parallel")
        w = starts[i] - starts[j]
        t = (w[0] * d2[1] - w[1] * d2[0]) / denom
        out[i] = starts[j] + t * d1
    return ConvexPolygon.from_coords(out)


def bounding_box(items: Iterable[PlacedPolygon]) -> tuple[Point2, Point2]:
    """
    Axis-aligned bounding box over placed polygons.

    Raises:
        GeometryError: If ``items`` is empty.
    """
    arrays = [world_coords(poly, pose) for poly, pose in items]
    if not arrays:
        raise GeometryError("bounding box of an empty set")
    allc = np.vstack(arrays)
    lo = allc.min(axis=0)
    hi = allc.max(axis=0)
    return Point2.from_array(lo), Point2.from_array(hi)


def box_area(box: tuple[Point2, Point2]) -> float:
    lo, hi = box
    return (hi.x - lo.x) * (hi.y - lo.y)


def convex_hull(points: np.ndarray) -> ConvexPolygon:
    """
    Convex hull of a point cloud.

    Raises:
        GeometryError: If the points do not span a positive area.
    """
    hull = MultiPoint([tuple(p) for p in np.asarray(points, dtype=float)]).convex_hull
    if not isinstance(hull, Polygon) or hull.area <= 0.0:
        raise GeometryError("convex hull of the points has no area")
    return ConvexPolygon.from_coords(hull.exterior.coords)


def to_shapely(poly: ConvexPolygon, pose: Pose2 | None = None) -> Polygon:
    """Shapely polygon of ``poly``, placed at ``pose`` when given."""
    coords = poly.coords if pose is None else world_coords(poly, pose)
    return Polygon(coords)


def angle_difference(a: float, b: float) -> float:
    """Absolute circular difference of two headings in degrees, in [0, 180]."""
    return abs(wrap_angle(a - b))
