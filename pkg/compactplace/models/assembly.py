"""
Assembly Result Models.

This module provides the per-layout assembly result and the aggregated
metric report produced by evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping, Sequence

from compactplace.core.exceptions import LayoutFormatError, LayoutInvariantError
from compactplace.models.episode import ContactType
from compactplace.models.geometry import Pose2


class AgentTag(str, Enum):
    """Source of an assembly."""

    OUR = "OUR"
    BL1 = "BL1"
    BL2 = "BL2"
    NO_L = "NO-L"
    ORACLE = "ORACLE"


@dataclass
class AssemblyResult:
    """
    Outcome of assembling one layout.

    Attributes:
        layout_id: Layout the result belongs to.
        agent: Source that produced the assembly.
        placed_poses: Final pose of every fragment that reached the table.
        collision_events: (fragment id, contact type) per terminating contact.
        success: Per-fragment success flag.
        placement_order: Ids in the order their placement was attempted.
        metadata: Planner metadata (scale index, shift counts, ...).
    """

    layout_id: str
    agent: AgentTag
    placed_poses: dict[int, Pose2] = field(default_factory=dict)
    collision_events: list[tuple[int, ContactType]] = field(default_factory=list)
    success: dict[int, bool] = field(default_factory=dict)
    placement_order: list[int] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        return (
            f"{self.__class__.__name__}:layout={self.layout_id},agent={self.agent.value},"
            f"placed={len(self.placed_poses)},collisions={len(self.collision_events)}"
        )

    @property
    def collided_ids(self) -> set[int]:
        return {fid for fid, _ in self.collision_events}

    @property
    def episodes(self) -> int:
        """Number of placement episodes in this assembly."""
        return len(self.placement_order)

    def validate(self, sequence: Sequence[int]) -> None:
        """
        Check that every sequence fragment was placed or collided.

        Raises:
            LayoutInvariantError: Naming the first fragment without either.
        """
        collided = self.collided_ids
        for fid in sequence:
            if fid not in self.placed_poses and fid not in collided:
                raise LayoutInvariantError(
                    f"fragment {fid} of {self.layout_id} has neither a pose nor a collision"
                )

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": 1,
            "type": "assembly",
            "layout_id": self.layout_id,
            "agent": self.agent.value,
            "placed_poses": {
                str(fid): {"x": p.x, "y": p.y, "theta": p.theta}
                for fid, p in self.placed_poses.items()
            },
            "collision_events": [[fid, c.value] for fid, c in self.collision_events],
            "success": {str(fid): ok for fid, ok in self.success.items()},
            "placement_order": list(self.placement_order),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AssemblyResult":
        try:
            if data["version"] != 1 or data["type"] != "assembly":
                raise LayoutFormatError("unsupported assembly file version or type")
            return cls(
                layout_id=str(data["layout_id"]),
                agent=AgentTag(data["agent"]),
                placed_poses={
                    int(k): Pose2(float(v["x"]), float(v["y"]), float(v["theta"]))
                    for k, v in data["placed_poses"].items()
                },
                collision_events=[
                    (int(fid), ContactType(c)) for fid, c in data["collision_events"]
                ],
                success={int(k): bool(v) for k, v in data["success"].items()},
                placement_order=[int(i) for i in data["placement_order"]],
                metadata=dict(data.get("metadata", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise LayoutFormatError(f"malformed assembly file: {exc}") from exc


@dataclass(frozen=True)
class MetricSummary:
    """
    Mean and sample standard deviation of one metric over layouts.

    Attributes:
        mean: Arithmetic mean.
        std: Sample standard deviation (0 for a single layout).
        n: Number of layouts aggregated.
    """

    mean: float
    std: float
    n: int

    def __str__(self) -> str:
        return f"{self.mean:.2f} ± {self.std:.2f}"

    @classmethod
    def of(cls, values: Sequence[float]) -> "MetricSummary":
        n = len(values)
        if n == 0:
            return cls(math.nan, math.nan, 0)
        mean = math.fsum(values) / n
        if n == 1:
            return cls(mean, 0.0, 1)
        var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
        return cls(mean, math.sqrt(var), n)

    def to_dict(self) -> dict[str, float]:
        return {"mean": self.mean, "std": self.std, "n": self.n}


@dataclass(frozen=True)
class MetricReport:
    """
    The four assembly metrics of one agent over a layout suite.

    Attributes:
        agent: Agent tag.
        bb_increase_pct: Bounding-box increase in percent.
        angle_diff_deg: Mean absolute angle error in degrees.
        mean_dist_mm: Excess nearest-centroid distance in millimeters.
        collision_rate_pct: Share of placement episodes ending in contact.
    """

    agent: AgentTag
    bb_increase_pct: MetricSummary
    angle_diff_deg: MetricSummary
    mean_dist_mm: MetricSummary
    collision_rate_pct: MetricSummary

    def __post_init__(self) -> None:
        rate = self.collision_rate_pct.mean
        if not math.isnan(rate) and not 0.0 <= rate <= 100.0:
            raise LayoutInvariantError(f"collision rate {rate} outside [0, 100]")
        bb = self.bb_increase_pct.mean
        if not math.isnan(bb) and bb < -100.0:
            raise LayoutInvariantError(f"bounding-box increase {bb} below -100")

    def __str__(self) -> str:
        return (
            f"{self.__class__.__name__}:{self.agent.value} "
            f"bb={self.bb_increase_pct} angle={self.angle_diff_deg} "
            f"dist={self.mean_dist_mm} coll={self.collision_rate_pct}"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "agent": self.agent.value,
            "bb_increase_pct": self.bb_increase_pct.to_dict(),
            "angle_diff_deg": self.angle_diff_deg.to_dict(),
            "mean_dist_mm": self.mean_dist_mm.to_dict(),
            "collision_rate_pct": self.collision_rate_pct.to_dict(),
        }
