"""
Geometry Data Models.

This module provides the immutable value types shared by every other
module: points, poses, segments and convex polygons. All lengths are in
millimeters and all angles in degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from compactplace.core.exceptions import GeometryError

EPS_VERTEX = 1e-6
EPS_CONVEX = 1e-9


def wrap_angle(theta: float) -> float:
    """Wrap an angle in degrees into [-180, 180)."""
    wrapped = (theta + 180.0) % 360.0 - 180.0
    if wrapped >= 180.0:
        wrapped -= 360.0
    return wrapped


def ring_signed_area(coords: np.ndarray) -> float:
    """Shoelace signed area of an (n, 2) vertex ring; positive when CCW."""
    x = coords[:, 0]
    y = coords[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def ring_centroid(coords: np.ndarray) -> np.ndarray:
    """Area-weighted centroid of an (n, 2) vertex ring."""
    x = coords[:, 0]
    y = coords[:, 1]
    xn = np.roll(x, -1)
    yn = np.roll(y, -1)
    cross = x * yn - xn * y
    a6 = 3.0 * float(cross.sum())
    if a6 == 0.0:
        raise GeometryError("centroid of a zero-area ring is undefined")
    return np.array([((x + xn) * cross).sum() / a6, ((y + yn) * cross).sum() / a6])


def _check_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise GeometryError(f"{name} has a non-finite coordinate: {values}")


@dataclass(frozen=True)
class Point2:
    """
    A point in the plane.

    Attributes:
        x: X coordinate in millimeters.
        y: Y coordinate in millimeters.
    """

    x: float
    y: float

    def __post_init__(self) -> None:
        _check_finite("Point2", self.x, self.y)

    def __str__(self) -> str:
        return f"{self.__class__.__name__}:x={self.x},y={self.y}"

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Point2":
        """Create from any two-element sequence."""
        return cls(float(values[0]), float(values[1]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def key(self) -> tuple[float, float]:
        """Lexicographic sort key (x, then y)."""
        return (self.x, self.y)


@dataclass(frozen=True)
class Point3:
    """
    A point in space.

    Attributes:
        x: X coordinate in millimeters.
        y: Y coordinate in millimeters.
        z: Height above the table plane in millimeters.
    """

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        _check_finite("Point3", self.x, self.y, self.z)

    def __str__(self) -> str:
        return f"{self.__class__.__name__}:x={self.x},y={self.y},z={self.z}"

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def distance_to(self, other: "Point3") -> float:
        return float(np.linalg.norm(self.as_array() - other.as_array()))


@dataclass(frozen=True)
class Pose2:
    """
    A planar pose: translation plus heading.

    The heading is wrapped into [-180, 180) on construction.

    Attributes:
        x: X position in millimeters.
        y: Y position in millimeters.
        theta: Heading in degrees.

    Example:
        >>> Pose2(0.0, 0.0, 270.0).theta
        -90.0
    """

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        _check_finite("Pose2", self.x, self.y, self.theta)
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    def __str__(self) -> str:
        return f"{self.__class__.__name__}:x={self.x},y={self.y},theta={self.theta}"

    @property
    def position(self) -> Point2:
        return Point2(self.x, self.y)

    def rotation(self) -> np.ndarray:
        """2x2 rotation matrix of the heading."""
        t = math.radians(self.theta)
        c, s = math.cos(t), math.sin(t)
        return np.array([[c, -s], [s, c]])

    def apply(self, coords: np.ndarray) -> np.ndarray:
        """Map (n, 2) local coordinates into the world frame."""
        return np.asarray(coords, dtype=float) @ self.rotation().T + np.array([self.x, self.y])

    def inverse_apply(self, coords: np.ndarray) -> np.ndarray:
        """Map (n, 2) world coordinates into this pose's local frame."""
        shifted = np.asarray(coords, dtype=float) - np.array([self.x, self.y])
        return shifted @ self.rotation()

    def translated(self, dx: float, dy: float) -> "Pose2":
        return Pose2(self.x + dx, self.y + dy, self.theta)


@dataclass(frozen=True)
class Segment2:
    """
    A straight segment between two points.

    Attributes:
        a: First endpoint.
        b: Second endpoint.
    """

    a: Point2
    b: Point2

    def __post_init__(self) -> None:
        if self.a.distance_to(self.b) <= EPS_VERTEX:
            raise GeometryError(f"degenerate segment {self.a} - {self.b}")

    @property
    def length(self) -> float:
        return self.a.distance_to(self.b)


@dataclass(frozen=True)
class ConvexPolygon:
    """
    A strictly convex polygon with counter-clockwise vertices.

    Vertices live in a local frame. Fragment shapes use the area centroid
    as origin (see :py:meth:`centered`); shapes derived from a fragment
    (offsets, gripper zones, footprints) stay in the fragment's frame.

    Attributes:
        vertices: Counter-clockwise vertex ring, without repetition of the
            first vertex.

    Raises:
        GeometryError: If the ring has fewer than 3 vertices, repeats a
            vertex, is clockwise or is not strictly convex.
    """

    vertices: tuple[Point2, ...]
    _coords: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        coords = np.array([[p.x, p.y] for p in self.vertices], dtype=float)
        _validate_ring(coords)
        coords.setflags(write=False)
        object.__setattr__(self, "_coords", coords)

    def __str__(self) -> str:
        return f"{self.__class__.__name__}:n={len(self.vertices)}"

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def coords(self) -> np.ndarray:
        """Read-only (n, 2) array of the vertices."""
        return self._coords

    @property
    def is_centered(self) -> bool:
        """Whether the area centroid is the local origin (within EPS_VERTEX)."""
        return bool(np.all(np.abs(ring_centroid(self._coords)) <= EPS_VERTEX))

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[float]]) -> "ConvexPolygon":
        """
        Create from a vertex ring in either orientation.

        A closing repeat of the first vertex, duplicate consecutive
        vertices and collinear vertices are removed first.
        """
        ring = _clean_ring(np.asarray(list(coords), dtype=float))
        return cls(tuple(Point2(float(x), float(y)) for x, y in ring))

    @classmethod
    def centered(
        cls, coords: Iterable[Sequence[float]]
    ) -> tuple["ConvexPolygon", Point2]:
        """
        Create a polygon whose local origin is its area centroid.

        Returns:
            The centered polygon and the centroid of the input ring, which
            is the position a pose needs to reproduce the input.
        """
        ring = _clean_ring(np.asarray(list(coords), dtype=float))
        if len(ring) < 3:
            raise GeometryError(f"polygon needs >= 3 vertices, got {len(ring)}")
        centroid = ring_centroid(ring)
        poly = cls.from_coords(ring - centroid)
        return poly, Point2(float(centroid[0]), float(centroid[1]))

    @classmethod
    def rectangle(
        cls, x0: float, y0: float, x1: float, y1: float
    ) -> "ConvexPolygon":
        """Axis-aligned rectangle with corners (x0, y0) and (x1, y1)."""
        return cls.from_coords([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


def _clean_ring(ring: np.ndarray) -> np.ndarray:
    if ring.ndim != 2 or ring.shape[1] != 2:
        raise GeometryError(f"vertex ring must be (n, 2), got {ring.shape}")
    if not np.all(np.isfinite(ring)):
        raise GeometryError("vertex ring has non-finite coordinates")
    if len(ring) > 1 and np.linalg.norm(ring[0] - ring[-1]) <= EPS_VERTEX:
        ring = ring[:-1]
    if len(ring) >= 3 and ring_signed_area(ring) < 0.0:
        ring = ring[::-1]

    changed = True
    while changed and len(ring) >= 3:
        changed = False
        n = len(ring)
        for i in range(n):
            prev_pt = ring[i - 1]
            cur = ring[i]
            nxt = ring[(i + 1) % n]
            e1 = cur - prev_pt
            e2 = nxt - cur
            l1 = float(np.hypot(*e1))
            l2 = float(np.hypot(*e2))
            if l1 <= EPS_VERTEX:
                ring = np.delete(ring, i, axis=0)
                changed = True
                break
            cross = e1[0] * e2[1] - e1[1] * e2[0]
            if l2 > EPS_VERTEX and abs(cross) <= EPS_CONVEX * l1 * l2:
                ring = np.delete(ring, i, axis=0)
                changed = True
                break
    return ring


def _validate_ring(coords: np.ndarray) -> None:
    n = len(coords)
    if n < 3:
        raise GeometryError(f"polygon needs >= 3 vertices, got {n}")
    if not np.all(np.isfinite(coords)):
        raise GeometryError("polygon has non-finite coordinates")
    edges = np.roll(coords, -1, axis=0) - coords
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    if np.any(lengths <= EPS_VERTEX):
        raise GeometryError("polygon has duplicate consecutive vertices")
    if ring_signed_area(coords) <= 0.0:
        raise GeometryError("polygon vertices are not counter-clockwise")
    prev_edges = np.roll(edges, 1, axis=0)
    cross = prev_edges[:, 0] * edges[:, 1] - prev_edges[:, 1] * edges[:, 0]
    if np.any(cross <= EPS_CONVEX):
        raise GeometryError("polygon is not strictly convex")
    # a ring of left turns that winds twice (a star) also passes the cross test
    turning = np.arctan2(cross, np.einsum("ij,ij->i", prev_edges, edges)).sum()
    if abs(turning - 2.0 * math.pi) > 1e-6:
        raise GeometryError("polygon winds more than once")


class ReferenceLine(str, Enum):
    """Workspace reference lines: l_x is the line y=0, l_y the line x=0."""

    LX = "x"
    LY = "y"
