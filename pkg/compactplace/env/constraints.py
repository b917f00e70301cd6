"""
Placement Constraints.

Distances from the placing object to the targets it should meet: the
corresponding corners on already placed neighbors and the reference
lines it borders. Points on the placing object are taken on its top face
at the current height; table corners and line feet lie on the top face of
a resting object.
"""

from __future__ import annotations

import math

import numpy as np

from compactplace.env.config import RewardConfig
from compactplace.geom.adjacency import point_to_line
from compactplace.models.episode import EnvState
from compactplace.models.geometry import Point2, ReferenceLine
from compactplace.models.layout import Layout

LINES = (ReferenceLine.LX, ReferenceLine.LY)


def placed_neighbors(state: EnvState, layout: Layout) -> list[int]:
    """Neighbors of the placing object already on the table, in sequence order."""
    pid = state.placing_id
    present = [n for n in layout.neighbors(pid) if n in state.table_poses and n != pid]
    return sorted(present, key=layout.sequence_index)


def corner_displacements(state: EnvState, layout: Layout) -> list[tuple[int, list[np.ndarray]]]:
    """
    3D vectors from each placing-object corner to its table counterpart.

    Returns:
        (neighbor id, two displacement vectors) per placed neighbor, in
        sequence order.
    """
    placing = layout.fragment(state.placing_id)
    top_z = state.object_bottom + placing.height
    out = []
    for nid in placed_neighbors(state, layout):
        neighbor = layout.fragment(nid)
        table_pose = state.table_poses[nid]
        disps = []
        for on_place, on_table in layout.corner_pairs(placing.id, nid):
            p = state.placing_pose.apply(on_place.as_array()[None, :])[0]
            q = table_pose.apply(on_table.as_array()[None, :])[0]
            disps.append(np.array([q[0] - p[0], q[1] - p[1], neighbor.height - top_z]))
        out.append((nid, disps))
    return out


def corner_distance_dc(state: EnvState, layout: Layout, cfg: RewardConfig) -> float:
    """
    Normalized mean corner distance to the placed neighbors.

    Example:
        Two 100 mm squares with a 20 mm gap along the shared edge normal
        give 20 / d_norm.
    """
    per_neighbor = [
        float(np.mean([np.linalg.norm(d) for d in disps]))
        for _, disps in corner_displacements(state, layout)
    ]
    if not per_neighbor:
        return 0.0
    return float(np.mean(per_neighbor)) / cfg.d_norm


def line_displacements(
    state: EnvState, layout: Layout, cfg: RewardConfig
) -> list[tuple[ReferenceLine, list[np.ndarray]]]:
    """
    3D vectors from the anchor corners to their feet on the bordered lines.

    Empty in the NO-L ablation.
    """
    if not cfg.use_reference_lines:
        return []
    placing = layout.fragment(state.placing_id)
    flags = layout.line_flags[placing.id]
    top_z = state.object_bottom + placing.height
    out = []
    for line in LINES:
        if not flags.borders(line):
            continue
        disps = []
        for anchor in flags.anchors(line):
            w = state.placing_pose.apply(anchor.as_array()[None, :])[0]
            _, foot = point_to_line(Point2(float(w[0]), float(w[1])), line)
            disps.append(np.array([foot.x - w[0], foot.y - w[1], placing.height - top_z]))
        if disps:
            out.append((line, disps))
    return out


def line_distance_dl(state: EnvState, layout: Layout, cfg: RewardConfig) -> float:
    """Normalized mean anchor distance to the bordered reference lines."""
    per_line = [
        float(np.mean([np.linalg.norm(d) for d in disps]))
        for _, disps in line_displacements(state, layout, cfg)
    ]
    if not per_line:
        return 0.0
    return float(np.mean(per_line)) / cfg.d_norm


def drop_height(state: EnvState, cfg: RewardConfig) -> float:
    """Normalized height of the object's bottom face, clipped to [0, 1]."""
    return min(max(state.object_bottom / cfg.drop_height_norm, 0.0), 1.0)


def angle_error(state: EnvState, layout: Layout) -> float:
    """Absolute heading error of the placing object in degrees."""
    target = layout.fragment(state.placing_id).layout_pose.theta
    diff = (state.placing_pose.theta - target + 180.0) % 360.0 - 180.0
    return math.fabs(diff)
