"""
Snake-Pattern Assembly Sequence.

A square window sweeps the layout in rows from bottom to top, left to
right on even rows and right to left on odd rows. Each fragment joins the
sequence the first time its centroid falls inside the window.
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

from compactplace.geom.polygon import bounding_box
from compactplace.models.layout import Fragment

logger = logging.getLogger(__name__)


def extract_sequence(
    fragments: Sequence[Fragment], window_height: float, window_step: float
) -> list[int]:
    """
    Assembly order of the fragments.

    Args:
        fragments: Fragments at their layout poses.
        window_height: Row height and window width in millimeters.
        window_step: Horizontal window step in millimeters.

    Returns:
        A permutation of the fragment ids.

    Example:
        A 2x2 grid of 100 mm squares with a 100 mm window yields
        bottom-left, bottom-right, top-right, top-left.
    """
    if not fragments:
        return []
    lo, hi = bounding_box((f.shape, f.layout_pose) for f in fragments)
    centroids = {f.id: (f.layout_pose.x, f.layout_pose.y) for f in fragments}
    n_rows = max(1, math.ceil((hi.y - lo.y) / window_height))

    sequence: list[int] = []
    seen: set[int] = set()
    for row in range(n_rows):
        y0 = lo.y + row * window_height
        y1 = y0 + window_height
        last_row = row == n_rows - 1
        row_ids = [
            fid
            for fid, (_, y) in centroids.items()
            if y0 <= y < y1 or (last_row and y == y1)
        ]
        left_to_right = row % 2 == 0
        k = 0
        while True:
            if left_to_right:
                x0 = lo.x + k * window_step
                if x0 >= hi.x:
                    break
                x1 = x0 + window_height
                members = [fid for fid in row_ids if x0 <= centroids[fid][0] < x1]
            else:
                x1 = hi.x - k * window_step
                if x1 <= lo.x:
                    break
                x0 = x1 - window_height
                members = [fid for fid in row_ids if x0 < centroids[fid][0] <= x1]
            new = [fid for fid in members if fid not in seen]
            new.sort(
                key=lambda fid: (
                    centroids[fid][0] if left_to_right else -centroids[fid][0],
                    centroids[fid][1],
                )
            )
            sequence.extend(new)
            seen.update(new)
            k += 1

    leftover = sorted(
        (fid for fid in centroids if fid not in seen),
        key=lambda fid: (centroids[fid][1], centroids[fid][0]),
    )
    if leftover:
        logger.debug("window sweep missed fragments %s; appending", leftover)
        sequence.extend(leftover)
    return sequence
