"""
Shared Edges and Corresponding Corners.

Two fragments are neighbors when an edge of one runs anti-parallel to an
edge of the other, close to it, with overlapping extent. The two most
distant endpoints over all shared segments are the corresponding corners
that placement aims to bring together.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from compactplace.core.exceptions import GeometryError
from compactplace.geom.polygon import world_coords
from compactplace.models.geometry import (
    EPS_VERTEX,
    ConvexPolygon,
    Point2,
    Pose2,
    ReferenceLine,
    Segment2,
)

EPS_ADJ = 1.0
EPS_ANGLE = 1.0


def shared_edge_segments(
    a: ConvexPolygon,
    pose_a: Pose2,
    b: ConvexPolygon,
    pose_b: Pose2,
    eps_adj: float = EPS_ADJ,
    eps_angle: float = EPS_ANGLE,
) -> list[Segment2]:
    """
    Segments along which two placed polygons share an edge.

    An edge pair qualifies when the edges are anti-parallel within
    ``eps_angle`` degrees, both endpoints of the edge of ``b`` lie within
    ``eps_adj`` of the line of the edge of ``a``, and their projections
    overlap by more than EPS_VERTEX. Segments lie on the midline between
    the two edges, endpoints in lexicographic order.

    Returns:
        Segments sorted by their endpoints; empty when not adjacent.
    """
    wa = world_coords(a, pose_a)
    wb = world_coords(b, pose_b)
    cos_limit = -math.cos(math.radians(eps_angle))
    segments: list[Segment2] = []

    for i in range(len(wa)):
        a0 = wa[i]
        ea = wa[(i + 1) % len(wa)] - a0
        la = float(np.hypot(*ea))
        u = ea / la
        normal = np.array([-u[1], u[0]])
        for j in range(len(wb)):
            b0 = wb[j]
            eb = wb[(j + 1) % len(wb)] - b0
            v = eb / float(np.hypot(*eb))
            if float(np.dot(u, v)) > cos_limit:
                continue
            b1 = b0 + eb
            d0 = float(np.dot(b0 - a0, normal))
            d1 = float(np.dot(b1 - a0, normal))
            if max(abs(d0), abs(d1)) > eps_adj:
                continue
            t0 = float(np.dot(b0 - a0, u))
            t1 = float(np.dot(b1 - a0, u))
            lo = max(0.0, min(t0, t1))
            hi = min(la, max(t0, t1))
            if hi - lo <= EPS_VERTEX:
                continue

            def midpoint(t: float) -> np.ndarray:
                p = a0 + t * u
                q = b0 + float(np.dot(p - b0, v)) * v
                return 0.5 * (p + q)

            ends = sorted(
                (Point2.from_array(midpoint(lo)), Point2.from_array(midpoint(hi))),
                key=Point2.key,
            )
            segments.append(Segment2(ends[0], ends[1]))

    segments.sort(key=lambda s: (s.a.key(), s.b.key()))
    return segments


def corresponding_corners(segments: list[Segment2]) -> tuple[Point2, Point2]:
    """
    The two most distant endpoints over all shared segments.

    Ties on distance go to the lexicographically smallest pair, so the
    result does not depend on the order of ``segments``.

    Raises:
        GeometryError: If ``segments`` is empty.
    """
    if not segments:
        raise GeometryError("corresponding corners need at least one shared segment")
    points = sorted({p for s in segments for p in (s.a, s.b)}, key=Point2.key)
    best_key = None
    best_pair = (points[0], points[-1])
    for p, q in combinations(points, 2):
        # points are sorted, so (p, q) is already in lexicographic order
        key = (-p.distance_to(q), p.x, p.y, q.x, q.y)
        if best_key is None or key < best_key:
            best_key = key
            best_pair = (p, q)
    return best_pair


def point_to_line(p: Point2, line: ReferenceLine | str) -> tuple[float, Point2]:
    """
    Distance from a point to a reference line and the foot point.

    Example:
        >>> point_to_line(Point2(30, 40), ReferenceLine.LX)
        (40.0, Point2(x=30.0, y=0.0))
    """
    line = ReferenceLine(line)
    if line is ReferenceLine.LX:
        return abs(p.y), Point2(p.x, 0.0)
    return abs(p.x), Point2(0.0, p.y)
