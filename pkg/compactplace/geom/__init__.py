"""
Convex Geometry.

This module provides the exact 2D convex-polygon primitives used by every
other module: areas, centroids, overlap tests, offsets, shared-edge
detection and transforms. All functions are pure.
"""

from compactplace.geom.polygon import (
    PlacedPolygon,
    angle_difference,
    area,
    bounding_box,
    box_area,
    centroid_world,
    convex_hull,
    offset,
    polygon_centroid,
    to_shapely,
    world_coords,
)
from compactplace.geom.collision import (
    EPS_TOUCH,
    coords_overlap,
    coords_penetration_depth,
    overlap,
    penetration_depth,
)
from compactplace.geom.adjacency import (
    EPS_ADJ,
    EPS_ANGLE,
    corresponding_corners,
    point_to_line,
    shared_edge_segments,
)

__all__ = [
    "PlacedPolygon",
    "area",
    "polygon_centroid",
    "world_coords",
    "centroid_world",
    "offset",
    "bounding_box",
    "box_area",
    "convex_hull",
    "to_shapely",
    "angle_difference",
    "EPS_TOUCH",
    "overlap",
    "coords_overlap",
    "penetration_depth",
    "coords_penetration_depth",
    "EPS_ADJ",
    "EPS_ANGLE",
    "shared_edge_segments",
    "corresponding_corners",
    "point_to_line",
]
