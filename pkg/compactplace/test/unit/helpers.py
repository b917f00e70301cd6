"""Hand-built layouts shared by the unit tests."""

from __future__ import annotations

from typing import Sequence

from compactplace.dataset.generator import fragment_mass
from compactplace.dataset.graph import compute_adjacency, compute_line_flags
from compactplace.dataset.sequence import extract_sequence
from compactplace.models.geometry import ConvexPolygon, Pose2
from compactplace.models.layout import Fragment, Layout

SIDE = 100.0
HEIGHT = 20.0


def square_layout(
    centers: Sequence[tuple[float, float]],
    side: float = SIDE,
    layout_id: str = "squares",
    sequence: Sequence[int] | None = None,
) -> Layout:
    """Layout of equal axis-aligned squares centered at ``centers``."""
    half = side / 2.0
    shape = ConvexPolygon.rectangle(-half, -half, half, half)
    fragments = tuple(
        Fragment(
            id=i,
            shape=shape,
            layout_pose=Pose2(x, y, 0.0),
            mass=fragment_mass(side * side, HEIGHT, 2000.0),
            height=HEIGHT,
        )
        for i, (x, y) in enumerate(centers)
    )
    adjacency, corners = compute_adjacency(fragments)
    return Layout(
        fragments=fragments,
        adjacency=adjacency,
        corners=corners,
        line_flags=compute_line_flags(fragments),
        sequence=tuple(sequence) if sequence is not None else tuple(extract_sequence(fragments, 100.0, 50.0)),
        layout_id=layout_id,
    )


def two_squares() -> Layout:
    """Two 100 mm squares side by side on both reference lines' corner."""
    return square_layout([(50.0, 50.0), (150.0, 50.0)], layout_id="two-squares")


def grid_squares(nx: int = 2, ny: int = 2) -> Layout:
    centers = [(50.0 + 100.0 * i, 50.0 + 100.0 * j) for j in range(ny) for i in range(nx)]
    return square_layout(centers, layout_id=f"grid-{nx}x{ny}")
