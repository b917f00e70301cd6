"""
Crossing-Cuts Layout Generator.

A global rectangle is cut by random straight lines; every cut splits each
piece it crosses into two convex halves. Attempts whose fragments are too
small, have too many neighbors or cannot be sequenced with a constraint
for every placement are rejected and retried with the next derived seed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from shapely.geometry import Polygon

from compactplace.core.exceptions import GeometryError, LayoutGenerationError
from compactplace.dataset.graph import (
    compute_adjacency,
    compute_line_flags,
    max_degree,
    unreachable_fragments,
)
from compactplace.dataset.sequence import extract_sequence
from compactplace.geom.polygon import PlacedPolygon, area, to_shapely
from compactplace.models.geometry import ConvexPolygon, Point2, Pose2
from compactplace.models.layout import MAX_NEIGHBORS, Fragment, GeneratorConfig, Layout

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 100

# mm^3 to m^3
_VOLUME_SCALE = 1e-9


@dataclass(frozen=True)
class CutLine:
    """
    An infinite straight line.

    Attributes:
        point: Any point on the line.
        direction: Direction vector; its left side is the ``left`` half.
    """

    point: Point2
    direction: Point2

    def __post_init__(self) -> None:
        if math.hypot(self.direction.x, self.direction.y) == 0.0:
            raise GeometryError("cut line direction must be non-zero")

    @classmethod
    def through(cls, x: float, y: float, angle_rad: float) -> "CutLine":
        return cls(Point2(x, y), Point2(math.cos(angle_rad), math.sin(angle_rad)))


def fragment_mass(shape_area: float, height: float, density: float) -> float:
    """Mass in kg of an extruded shape (mm^2, mm, kg/m^3)."""
    return shape_area * height * density * _VOLUME_SCALE


def _half_plane(line: CutLine, reach: float, left: bool) -> Polygon:
    p = line.point.as_array()
    d = line.direction.as_array() / math.hypot(line.direction.x, line.direction.y)
    n = np.array([-d[1], d[0]]) if left else np.array([d[1], -d[0]])
    a = p - reach * d
    b = p + reach * d
    return Polygon([a, b, b + reach * n, a + reach * n])


def cut_polygon(
    poly: ConvexPolygon, pose: Pose2, line: CutLine
) -> tuple[PlacedPolygon | None, PlacedPolygon | None]:
    """
    Split a placed polygon along a line.

    Returns:
        The (left, right) halves as centered polygons with their poses
        (heading 0); a side is None when the line misses the polygon.
    """
    world = to_shapely(poly, pose)
    minx, miny, maxx, maxy = world.bounds
    reach = 4.0 * (
        math.hypot(maxx - minx, maxy - miny)
        + math.hypot(line.point.x - minx, line.point.y - miny)
        + 1.0
    )
    halves = []
    for left in (True, False):
        piece = world.intersection(_half_plane(line, reach, left))
        if piece.is_empty or piece.area <= 1e-12 * world.area:
            halves.append(None)
            continue
        if not isinstance(piece, Polygon):
            raise GeometryError(f"cut produced a {piece.geom_type}")
        shape, centroid = ConvexPolygon.centered(piece.exterior.coords)
        halves.append((shape, Pose2(centroid.x, centroid.y, 0.0)))
    return halves[0], halves[1]


class _Rejected(Exception):
    pass


def derive_seed(seed: int, attempt: int) -> int:
    """Seed of a generation attempt, derived from the base seed."""
    return int(np.random.SeedSequence([seed, attempt]).generate_state(1, np.uint64)[0])


def generate_layout(cfg: GeneratorConfig, layout_id: str | None = None) -> Layout:
    """
    Generate a crossing-cuts layout.

    Args:
        cfg: Generator settings, seed included.
        layout_id: Name of the layout; defaults to ``layout-<seed>``.

    Returns:
        A validated layout with adjacency, corners, line flags and sequence.

    Raises:
        LayoutGenerationError: If MAX_ATTEMPTS consecutive attempts are rejected.
    """
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng(derive_seed(cfg.seed, attempt))
        try:
            layout = _attempt(cfg, rng, layout_id or f"layout-{cfg.seed}")
        except _Rejected as exc:
            logger.debug("seed %d attempt %d rejected: %s", cfg.seed, attempt, exc)
            continue
        except GeometryError as exc:
            logger.debug("seed %d attempt %d degenerate: %s", cfg.seed, attempt, exc)
            continue
        logger.info(
            "generated %s with %d fragments (attempt %d)",
            layout.layout_id,
            len(layout),
            attempt,
        )
        return layout
    raise LayoutGenerationError(
        f"no acceptable layout for seed {cfg.seed} after {MAX_ATTEMPTS} attempts"
    )


def _attempt(cfg: GeneratorConfig, rng: np.random.Generator, layout_id: str) -> Layout:
    shape, c = ConvexPolygon.centered(
        [(0.0, 0.0), (cfg.global_width, 0.0), (cfg.global_width, cfg.global_height), (0.0, cfg.global_height)]
    )
    pieces: list[PlacedPolygon] = [(shape, Pose2(c.x, c.y, 0.0))]
    for _ in range(cfg.n_cuts):
        x, y = rng.uniform((0.0, 0.0), (cfg.global_width, cfg.global_height))
        line = CutLine.through(float(x), float(y), float(rng.uniform(0.0, 2.0 * math.pi)))
        cut: list[PlacedPolygon] = []
        for poly, pose in pieces:
            cut.extend(half for half in cut_polygon(poly, pose, line) if half is not None)
        pieces = cut

    areas = [area(poly) for poly, _ in pieces]
    if min(areas) < cfg.min_fragment_area:
        raise _Rejected(f"fragment of {min(areas):.1f} mm^2 below minimum")

    order = sorted(range(len(pieces)), key=lambda k: (pieces[k][1].y, pieces[k][1].x))
    fragments = tuple(
        Fragment(
            id=fid,
            shape=pieces[k][0],
            layout_pose=pieces[k][1],
            mass=fragment_mass(areas[k], cfg.height, cfg.density),
            height=cfg.height,
        )
        for fid, k in enumerate(order)
    )

    adjacency, corners = compute_adjacency(fragments)
    if max_degree(adjacency) > MAX_NEIGHBORS:
        raise _Rejected(f"a fragment has more than {MAX_NEIGHBORS} neighbors")
    line_flags = compute_line_flags(fragments)
    sequence = extract_sequence(fragments, cfg.window_height, cfg.window_step)
    missing = unreachable_fragments(sequence, adjacency, line_flags)
    if missing:
        raise _Rejected(f"fragments {missing} have no constraint when placed")

    return Layout(
        fragments=fragments,
        adjacency=adjacency,
        corners=corners,
        line_flags=line_flags,
        sequence=tuple(sequence),
        config=cfg,
        layout_id=layout_id,
    )
