"""
Top-Down SVG Rendering.

Layouts and assembly results are drawn as filled fragment polygons with
the reference lines, corresponding corners as dots, and optional gripper
footprint outlines. The y axis points up. Coordinates are rounded to a
fixed precision so the same input always yields the same bytes.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Mapping

import numpy as np
import svgwrite

from compactplace.geom.polygon import world_coords
from compactplace.models.assembly import AssemblyResult
from compactplace.models.geometry import ConvexPolygon, Pose2
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)

PRECISION = 3
MARGIN = 20.0
PALETTE = ("#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5")
COLLISION_STROKE = "#d62728"
FOOTPRINT_STROKE = "#7f7f7f"
LINE_STROKE = "#1f77b4"


def _pt(xy) -> tuple[float, float]:
    # svg y grows downwards
    return (round(float(xy[0]), PRECISION), round(-float(xy[1]), PRECISION))


def scene_poses(layout: Layout, result: AssemblyResult | None = None) -> dict[int, Pose2]:
    """Poses to draw: the layout's, or the result's placed poses."""
    if result is None:
        return layout.layout_poses()
    return dict(result.placed_poses)


def render_svg(
    layout: Layout,
    result: AssemblyResult | None = None,
    footprints: Mapping[int, ConvexPolygon] | None = None,
) -> str:
    """
    SVG document of a layout or of an assembly of it.

    Args:
        layout: Layout supplying shapes, corners and ids.
        result: Assembly to draw instead of the layout poses. Fragments
            without a placed pose are omitted; collided fragments get a
            red dashed stroke.
        footprints: Outlines in fragment-local frames, drawn at each
            fragment's pose.
    """
    poses = scene_poses(layout, result)
    collided = result.collided_ids if result is not None else set()
    ids = sorted(poses)

    rings = {fid: world_coords(layout.fragment(fid).shape, poses[fid]) for fid in ids}
    extra = [world_coords(footprints[fid], poses[fid]) for fid in ids if footprints and fid in footprints]
    points = np.vstack(list(rings.values()) + extra + [np.zeros((1, 2))])
    lo = points.min(axis=0) - MARGIN
    hi = points.max(axis=0) + MARGIN
    width, height = round(float(hi[0] - lo[0]), PRECISION), round(float(hi[1] - lo[1]), PRECISION)

    dwg = svgwrite.Drawing(
        size=(f"{width}mm", f"{height}mm"),
        viewBox=f"{round(float(lo[0]), PRECISION)} {round(-float(hi[1]), PRECISION)} {width} {height}",
        debug=False,
    )
    dwg.add(dwg.rect(insert=_pt((lo[0], hi[1])), size=(width, height), fill="white"))

    # l_x is y=0, l_y is x=0
    lines = dwg.add(dwg.g(id="reference-lines", stroke=LINE_STROKE, stroke_width=0.8))
    lines.add(dwg.line(start=_pt((lo[0], 0.0)), end=_pt((hi[0], 0.0))))
    lines.add(dwg.line(start=_pt((0.0, lo[1])), end=_pt((0.0, hi[1]))))

    fragments = dwg.add(dwg.g(id="fragments", stroke="black", stroke_width=0.6))
    for fid in ids:
        attrs = {"fill": PALETTE[fid % len(PALETTE)], "id": f"fragment-{fid}"}
        if fid in collided:
            attrs.update(stroke=COLLISION_STROKE, stroke_width=1.5, stroke_dasharray="4,2")
        fragments.add(dwg.polygon([_pt(p) for p in rings[fid]], **attrs))

    if footprints:
        outlines = dwg.add(
            dwg.g(id="footprints", fill="none", stroke=FOOTPRINT_STROKE, stroke_width=0.5, stroke_dasharray="2,2")
        )
        for fid in ids:
            if fid in footprints:
                outlines.add(dwg.polygon([_pt(p) for p in world_coords(footprints[fid], poses[fid])]))

    corners = dwg.add(dwg.g(id="corners", fill="black"))
    for a, b in sorted(layout.adjacency):
        if a not in poses or b not in poses:
            continue
        for pair in layout.corners[(a, b)]:
            for fid, local in ((a, pair.on_a), (b, pair.on_b)):
                corners.add(dwg.circle(center=_pt(poses[fid].apply(local.as_array()[None, :])[0]), r=1.5))

    return dwg.tostring()


def write_svg(path: str | Path, document: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(document + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return path
