"""
Layout Graph.

This module derives the neighbor structure of a set of fragments placed
at their layout poses: adjacency pairs with their corresponding corners,
reference-line flags, and the sequence reachability check.
"""

from __future__ import annotations

import logging
from typing import Mapping, Sequence

import numpy as np

from compactplace.geom.adjacency import (
    EPS_ADJ,
    corresponding_corners,
    shared_edge_segments,
)
from compactplace.geom.polygon import bounding_box, world_coords
from compactplace.models.geometry import Point2
from compactplace.models.layout import CornerPair, Fragment, LineFlags

logger = logging.getLogger(__name__)


def compute_adjacency(
    fragments: Sequence[Fragment], eps_adj: float = EPS_ADJ
) -> tuple[frozenset[tuple[int, int]], dict[tuple[int, int], tuple[CornerPair, CornerPair]]]:
    """
    Neighbor pairs and their corresponding corners.

    Returns:
        The sorted id pairs that share an edge, and for each pair the two
        corresponding corners expressed in both fragments' local frames.
    """
    placed = [(f, world_coords(f.shape, f.layout_pose)) for f in fragments]
    boxes = [(c.min(axis=0), c.max(axis=0)) for _, c in placed]
    pairs: set[tuple[int, int]] = set()
    corners: dict[tuple[int, int], tuple[CornerPair, CornerPair]] = {}

    for ia in range(len(placed)):
        fa, _ = placed[ia]
        for ib in range(ia + 1, len(placed)):
            fb, _ = placed[ib]
            lo_a, hi_a = boxes[ia]
            lo_b, hi_b = boxes[ib]
            if np.any(lo_a - hi_b > eps_adj) or np.any(lo_b - hi_a > eps_adj):
                continue
            segments = shared_edge_segments(
                fa.shape, fa.layout_pose, fb.shape, fb.layout_pose, eps_adj
            )
            if not segments:
                continue
            first, second = (fa, fb) if fa.id < fb.id else (fb, fa)
            key = (first.id, second.id)
            pairs.add(key)
            world = np.array([c.as_array() for c in corresponding_corners(segments)])
            on_a = first.layout_pose.inverse_apply(world)
            on_b = second.layout_pose.inverse_apply(world)
            corners[key] = tuple(
                CornerPair(Point2.from_array(on_a[k]), Point2.from_array(on_b[k]))
                for k in range(2)
            )

    ordered = dict(sorted(corners.items()))
    return frozenset(pairs), ordered


def compute_line_flags(
    fragments: Sequence[Fragment], eps_adj: float = EPS_ADJ
) -> dict[int, LineFlags]:
    """
    Reference-line contact per fragment.

    A fragment borders l_x (l_y) when one of its vertices lies within
    ``eps_adj`` of the min-y (min-x) edge of the layout bounding box. The
    anchors are the extreme on-line vertices, stored in the local frame.
    """
    lo, _ = bounding_box((f.shape, f.layout_pose) for f in fragments)
    flags: dict[int, LineFlags] = {}
    for f in sorted(fragments, key=lambda fr: fr.id):
        w = world_coords(f.shape, f.layout_pose)
        on_lx = np.flatnonzero(np.abs(w[:, 1] - lo.y) <= eps_adj)
        on_ly = np.flatnonzero(np.abs(w[:, 0] - lo.x) <= eps_adj)
        flags[f.id] = LineFlags(
            borders_lx=bool(on_lx.size),
            borders_ly=bool(on_ly.size),
            anchors_lx=_extreme_anchors(f, on_lx, w[:, 0]),
            anchors_ly=_extreme_anchors(f, on_ly, w[:, 1]),
        )
    return flags


def _extreme_anchors(f: Fragment, idx: np.ndarray, along: np.ndarray) -> tuple[Point2, ...]:
    if idx.size == 0:
        return ()
    first = idx[np.argmin(along[idx])]
    last = idx[np.argmax(along[idx])]
    chosen = [first] if first == last else [first, last]
    return tuple(Point2.from_array(f.shape.coords[i]) for i in chosen)


def max_degree(adjacency: frozenset[tuple[int, int]]) -> int:
    degree: dict[int, int] = {}
    for i, j in adjacency:
        degree[i] = degree.get(i, 0) + 1
        degree[j] = degree.get(j, 0) + 1
    return max(degree.values(), default=0)


def unreachable_fragments(
    sequence: Sequence[int],
    adjacency: frozenset[tuple[int, int]],
    line_flags: Mapping[int, LineFlags],
) -> list[int]:
    """
    Fragments without a constraint when their turn comes.

    Every fragment after the first needs an earlier-sequenced neighbor or
    a reference line it borders.
    """
    placed: set[int] = set()
    missing = []
    for k, fid in enumerate(sequence):
        if k > 0:
            has_neighbor = any(
                (min(fid, other), max(fid, other)) in adjacency for other in placed
            )
            if not has_neighbor and not line_flags[fid].any:
                missing.append(fid)
        placed.add(fid)
    return missing
