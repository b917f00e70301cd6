"""
Layout Data Models.

This module provides the fragment and layout dataclasses together with
the generator configuration that produced them.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Mapping

from compactplace.core.exceptions import ConfigError, GeometryError, LayoutInvariantError
from compactplace.models.geometry import (
    ConvexPolygon,
    Point2,
    Pose2,
    ReferenceLine,
    ring_signed_area,
)

MAX_NEIGHBORS = 6


@dataclass(frozen=True)
class GeneratorConfig:
    """
    Settings of the crossing-cuts layout generator.

    Attributes:
        global_width: Width of the global rectangle in millimeters.
        global_height: Height of the global rectangle in millimeters.
        n_cuts: Number of straight cuts.
        density: Material density in kg/m^3.
        height: Extrusion thickness of every fragment in millimeters.
        min_fragment_area: Smallest accepted fragment area in mm^2.
        seed: Base seed; attempt ``k`` uses a seed derived from it.
        window_height: Height (and width) of the sequencing window in mm.
        window_step: Horizontal step of the sequencing window in mm.
    """

    global_width: float = 300.0
    global_height: float = 300.0
    n_cuts: int = 6
    density: float = 2000.0
    height: float = 20.0
    min_fragment_area: float = 900.0
    seed: int = 0
    window_height: float = 100.0
    window_step: float = 50.0

    def __post_init__(self) -> None:
        for name in (
            "global_width",
            "global_height",
            "density",
            "height",
            "min_fragment_area",
            "window_height",
            "window_step",
        ):
            if not getattr(self, name) > 0:
                raise ConfigError(f"generator.{name} must be > 0")
        if self.n_cuts < 1:
            raise ConfigError("generator.n_cuts must be >= 1")
        if self.seed < 0:
            raise ConfigError("generator.seed must be >= 0")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GeneratorConfig":
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"generator.{key} is not a known field")
        return cls(**dict(data))


@dataclass(frozen=True)
class Fragment:
    """
    A convex fragment of a layout.

    Attributes:
        id: Fragment id, unique within its layout.
        shape: Centered convex outline.
        layout_pose: Pose of the fragment in the layout frame.
        mass: Mass in kilograms.
        height: Extrusion thickness in millimeters.
    """

    id: int
    shape: ConvexPolygon
    layout_pose: Pose2
    mass: float
    height: float

    def __post_init__(self) -> None:
        if not self.shape.is_centered:
            raise GeometryError(f"fragment {self.id} shape is not centered on its centroid")
        if not (self.mass > 0 and self.height > 0):
            raise GeometryError(f"fragment {self.id} needs positive mass and height")

    def __str__(self) -> str:
        return (
            f"{self.__class__.__name__}:id={self.id},n={len(self.shape)},"
            f"mass={self.mass:.4f}"
        )

    @property
    def area(self) -> float:
        return ring_signed_area(self.shape.coords)


@dataclass(frozen=True)
class CornerPair:
    """
    One pair of corresponding corners.

    Attributes:
        on_a: Corner in the local frame of the lower-id fragment.
        on_b: The same corner in the local frame of the higher-id fragment.
    """

    on_a: Point2
    on_b: Point2


@dataclass(frozen=True)
class LineFlags:
    """
    Reference-line contact of one fragment.

    Anchors are vertices in the fragment's local frame that lie on the line
    at layout pose; at most two per line.
    """

    borders_lx: bool = False
    borders_ly: bool = False
    anchors_lx: tuple[Point2, ...] = ()
    anchors_ly: tuple[Point2, ...] = ()

    def borders(self, line: ReferenceLine) -> bool:
        return self.borders_lx if line is ReferenceLine.LX else self.borders_ly

    def anchors(self, line: ReferenceLine) -> tuple[Point2, ...]:
        return self.anchors_lx if line is ReferenceLine.LX else self.anchors_ly

    @property
    def any(self) -> bool:
        return self.borders_lx or self.borders_ly


def pair_key(i: int, j: int) -> tuple[int, int]:
    """Unordered id pair as a sorted tuple."""
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Layout:
    """
    A target arrangement of fragments.

    The reference lines l_x (y=0) and l_y (x=0) coincide with the min edges
    of the layout's bounding box for generated layouts.

    Attributes:
        fragments: Fragments ordered by id.
        adjacency: Unordered neighbor pairs as sorted tuples.
        corners: Two corresponding-corner pairs per adjacency pair.
        line_flags: Reference-line contact per fragment id.
        sequence: Assembly order (a permutation of the ids).
        config: Generator settings, when the layout was generated.
        layout_id: Name used in reports and file names.
    """

    fragments: tuple[Fragment, ...]
    adjacency: frozenset[tuple[int, int]]
    corners: Mapping[tuple[int, int], tuple[CornerPair, CornerPair]]
    line_flags: Mapping[int, LineFlags]
    sequence: tuple[int, ...]
    config: GeneratorConfig | None = None
    layout_id: str = ""
    _by_id: dict[int, Fragment] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_id = {f.id: f for f in self.fragments}
        if len(by_id) != len(self.fragments):
            raise LayoutInvariantError("fragment ids are not unique")
        object.__setattr__(self, "_by_id", by_id)

    def __str__(self) -> str:
        return (
            f"{self.__class__.__name__}:id={self.layout_id},"
            f"fragments={len(self.fragments)},pairs={len(self.adjacency)}"
        )

    def __len__(self) -> int:
        return len(self.fragments)

    def fragment(self, fragment_id: int) -> Fragment:
        try:
            return self._by_id[fragment_id]
        except KeyError:
            raise LayoutInvariantError(f"layout has no fragment {fragment_id}") from None

    def neighbors(self, fragment_id: int) -> list[int]:
        """Ids adjacent to the given fragment, ascending."""
        out = []
        for i, j in self.adjacency:
            if i == fragment_id:
                out.append(j)
            elif j == fragment_id:
                out.append(i)
        return sorted(out)

    def corner_pairs(self, this_id: int, other_id: int) -> list[tuple[Point2, Point2]]:
        """
        Corresponding corners oriented from ``this_id`` to ``other_id``.

        Returns:
            Two (point on this fragment, point on other fragment) tuples,
            each point in its own fragment's local frame.
        """
        pairs = self.corners[pair_key(this_id, other_id)]
        if this_id < other_id:
            return [(p.on_a, p.on_b) for p in pairs]
        return [(p.on_b, p.on_a) for p in pairs]

    def sequence_index(self, fragment_id: int) -> int:
        return self.sequence.index(fragment_id)

    def layout_poses(self) -> dict[int, Pose2]:
        return {f.id: f.layout_pose for f in self.fragments}
