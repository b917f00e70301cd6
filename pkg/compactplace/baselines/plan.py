"""
Placement Plans.

This module provides the plan produced by the scripted planners, its
JSON storage and the seeded per-fragment grasp yaws.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from compactplace.core.exceptions import LayoutFormatError, LayoutInvariantError
from compactplace.models.assembly import AgentTag
from compactplace.models.geometry import Pose2
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)

PLAN_VERSION = 1
GRASP_YAW_RANGE = 90.0


@dataclass(frozen=True)
class PlanTarget:
    """
    Target of one fragment.

    Attributes:
        fragment_id: Fragment to place.
        pose: Target pose on the table.
        grasp_yaw: Object yaw minus gripper yaw in degrees.
    """

    fragment_id: int
    pose: Pose2
    grasp_yaw: float = 0.0


@dataclass
class PlacementPlan:
    """
    Ordered fragment targets of a scripted assembly.

    Attributes:
        kind: Planner that produced the plan.
        layout_id: Layout the plan belongs to.
        targets: One target per fragment in sequence order.
        metadata: Scale index, shift counts, ...
    """

    kind: AgentTag
    layout_id: str
    targets: list[PlanTarget] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        return f"{self.__class__.__name__}:{self.kind.value},layout={self.layout_id},targets={len(self.targets)}"

    def __len__(self) -> int:
        return len(self.targets)

    def poses(self) -> dict[int, Pose2]:
        return {t.fragment_id: t.pose for t in self.targets}

    def validate(self, layout: Layout) -> None:
        """
        Check that the plan follows the layout's sequence.

        Raises:
            LayoutInvariantError: If the target order differs from the sequence.
        """
        order = [t.fragment_id for t in self.targets]
        if order != list(layout.sequence):
            raise LayoutInvariantError(
                f"plan order {order} does not match sequence {list(layout.sequence)}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": PLAN_VERSION,
            "type": "plan",
            "kind": self.kind.value,
            "layout_id": self.layout_id,
            "targets": [
                {
                    "id": t.fragment_id,
                    "x": t.pose.x,
                    "y": t.pose.y,
                    "theta": t.pose.theta,
                    "grasp_yaw": t.grasp_yaw,
                }
                for t in self.targets
            ],
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PlacementPlan":
        try:
            if data["version"] != PLAN_VERSION or data["type"] != "plan":
                raise LayoutFormatError("unsupported plan file version or type")
            return cls(
                kind=AgentTag(data["kind"]),
                layout_id=str(data["layout_id"]),
                targets=[
                    PlanTarget(
                        int(t["id"]),
                        Pose2(float(t["x"]), float(t["y"]), float(t["theta"])),
                        float(t.get("grasp_yaw", 0.0)),
                    )
                    for t in data["targets"]
                ],
                metadata=dict(data.get("metadata", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise LayoutFormatError(f"malformed plan file: {exc}") from exc


def save_plan(plan: PlacementPlan, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(plan.to_dict(), indent=2) + "\n", encoding="utf-8")
    logger.debug("wrote plan %s", path)
    return path


def load_plan(path: str | Path) -> PlacementPlan:
    """
    Raises:
        LayoutFormatError: If the file is not valid plan JSON.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise LayoutFormatError(f"cannot read plan {path}: {exc}") from exc
    return PlacementPlan.from_dict(data)


def grasp_yaws(layout: Layout, seed: int = 0) -> dict[int, float]:
    """Seeded grasp yaw in [-90, 90] degrees for every fragment, by id."""
    rng = np.random.default_rng(seed)
    ids = sorted(f.id for f in layout.fragments)
    values = rng.uniform(-GRASP_YAW_RANGE, GRASP_YAW_RANGE, size=len(ids))
    return {fid: float(v) for fid, v in zip(ids, values)}
