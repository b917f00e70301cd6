"""
Environment Configuration.

This module provides the reward factors, the kinematic gripper model,
the curriculum bounds and the environment settings, each loadable from
the ``env`` section of a JSON config file.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from compactplace.core.exceptions import ConfigError
from compactplace.models.geometry import ConvexPolygon


def _reject_unknown(cls: type, data: Mapping[str, Any], section: str) -> None:
    known = {f.name for f in fields(cls)}
    for key in data:
        if key not in known:
            raise ConfigError(f"{section}.{key} is not a known field")


@dataclass(frozen=True)
class RewardConfig:
    """
    Reward scaling factors.

    Attributes:
        alpha_n: Distance penalty while placing.
        alpha_theta: Angle penalty while placing.
        alpha_c: Corner term of the release reward.
        alpha_l: Line term of the release reward.
        beta_c: Corner distance sharpness of the release reward.
        beta_l: Line distance sharpness of the release reward.
        alpha_d: Drop-height penalty at release.
        alpha_m: Object displacement penalty while retracting.
        alpha_g: Retract-goal distance penalty.
        alpha_col_o: Placing object against a table object.
        alpha_col_r: Gripper against a table object.
        alpha_col_t: Gripper below the table plane.
        d_norm: Distance normalization in millimeters.
        drop_height_norm: Drop-height normalization in millimeters.
        use_reference_lines: False selects the NO-L ablation.
    """

    alpha_n: float = 0.1
    alpha_theta: float = 0.1
    alpha_c: float = 3.0
    alpha_l: float = 6.0
    beta_c: float = 3.0
    beta_l: float = 3.0
    alpha_d: float = 0.5
    alpha_m: float = 0.5
    alpha_g: float = 0.1
    alpha_col_o: float = 2.0
    alpha_col_r: float = 2.0
    alpha_col_t: float = 1.0
    d_norm: float = 1000.0
    drop_height_norm: float = 100.0
    use_reference_lines: bool = True

    def __post_init__(self) -> None:
        for f in fields(self):
            if f.name.startswith(("alpha_", "beta_")) and getattr(self, f.name) < 0:
                raise ConfigError(f"reward.{f.name} must be >= 0")
        if self.d_norm <= 0:
            raise ConfigError("reward.d_norm must be > 0")
        if self.drop_height_norm <= 0:
            raise ConfigError("reward.drop_height_norm must be > 0")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RewardConfig":
        _reject_unknown(cls, data, "reward")
        return cls(**dict(data))


@dataclass(frozen=True)
class GripperModel:
    """
    Kinematic two-finger gripper.

    The closing axis is the gripper's local x axis. Each finger occupies a
    rectangle ``finger_width`` along the closing axis by ``finger_depth``
    across it. Closed fingers hug the grasped object; open fingers sit at
    the nominal opening, or stay at the object when it is wider.

    Attributes:
        finger_width: Finger extent along the closing axis in mm.
        finger_depth: Finger extent across the closing axis in mm.
        opening_width_open: Outer distance between open fingers in mm.
        palm_clearance: Width of the palm strip between the fingers in mm.
        finger_length: Vertical finger extent below the EE point in mm.
        grasp_margin: Height of the fingertips above the object's bottom face.
    """

    finger_width: float = 20.0
    finger_depth: float = 40.0
    opening_width_open: float = 85.0
    palm_clearance: float = 30.0
    finger_length: float = 40.0
    grasp_margin: float = 2.0

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ConfigError(f"gripper.{f.name} must be >= 0")
        if self.opening_width_open <= 0:
            raise ConfigError("gripper.opening_width_open must be > 0")
        if self.opening_width_open < 2.0 * self.finger_width:
            raise ConfigError("gripper.opening_width_open must fit both fingers")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GripperModel":
        _reject_unknown(cls, data, "gripper")
        return cls(**dict(data))

    @property
    def rest_height(self) -> float:
        """EE height when the grasped object rests on the table."""
        return self.finger_length + self.grasp_margin

    def _inner_faces(self, u_min: float, u_max: float, opened: bool) -> tuple[float, float]:
        if not opened:
            return u_min, u_max
        reach = self.opening_width_open / 2.0 - self.finger_width
        return min(-reach, u_min), max(reach, u_max)

    def finger_zones(self, u_min: float, u_max: float, opened: bool) -> list[np.ndarray]:
        """
        Finger rectangles in the gripper frame as (4, 2) corner arrays.

        Args:
            u_min: Object extent along the closing axis, negative side.
            u_max: Object extent along the closing axis, positive side.
            opened: Whether the fingers are open.
        """
        left, right = self._inner_faces(u_min, u_max, opened)
        half = self.finger_depth / 2.0
        fw = self.finger_width
        return [
            np.array([[right, -half], [right + fw, -half], [right + fw, half], [right, half]]),
            np.array([[left - fw, -half], [left, -half], [left, half], [left - fw, half]]),
        ]

    def finger_polygons(self, u_min: float, u_max: float, opened: bool) -> list[ConvexPolygon]:
        """Finger rectangles as polygons; empty for zero-size fingers."""
        if self.finger_width <= 0 or self.finger_depth <= 0:
            return []
        return [ConvexPolygon.from_coords(z) for z in self.finger_zones(u_min, u_max, opened)]

    def operation_points(self, u_min: float, u_max: float) -> np.ndarray:
        """Corner points of the closed and open finger zones plus the palm strip."""
        half_open = self.opening_width_open / 2.0
        half_palm = self.palm_clearance / 2.0
        palm = np.array(
            [
                [-half_open, -half_palm],
                [half_open, -half_palm],
                [half_open, half_palm],
                [-half_open, half_palm],
            ]
        )
        zones = self.finger_zones(u_min, u_max, False) + self.finger_zones(u_min, u_max, True)
        return np.vstack(zones + [palm])


@dataclass(frozen=True)
class CurriculumConfig:
    """
    Bounds of the start-height curriculum.

    Attributes:
        n_levels: Number of levels (first and last included).
        start_height: Object bottom height above the place position at level 0.
        reach: Arm reach in mm; the last level starts at reach/4 above the
            assembly center.
        retract_start: Retract height at level 0 in mm.
        retract_end: Retract height at the last level in mm.
        promotion_threshold: Evaluation success rate that must be exceeded.
    """

    n_levels: int = 22
    start_height: float = 30.0
    reach: float = 850.0
    retract_start: float = 30.0
    retract_end: float = 80.0
    promotion_threshold: float = 0.8

    def __post_init__(self) -> None:
        if self.n_levels < 2:
            raise ConfigError("curriculum.n_levels must be >= 2")
        for name in ("start_height", "reach", "retract_start", "retract_end"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"curriculum.{name} must be > 0")
        if not 0.0 <= self.promotion_threshold <= 1.0:
            raise ConfigError("curriculum.promotion_threshold must be in [0, 1]")

    @property
    def max_level(self) -> int:
        return self.n_levels - 1

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CurriculumConfig":
        _reject_unknown(cls, data, "curriculum")
        return cls(**dict(data))


@dataclass(frozen=True)
class EnvConfig:
    """
    Settings of the placement environment.

    Attributes:
        reward: Reward factors.
        gripper: Gripper geometry.
        curriculum: Curriculum bounds.
        max_steps: Episode step limit.
        translation_step: EE translation per unit action in mm.
        rotation_step: EE rotation per unit action in degrees.
        retract_tolerance: Distance to the retract goal that counts as success.
        eps_touch: Touch tolerance of the contact checks in mm.
        workspace: EE box size (x, y, z) in mm, centered on the layout in x/y.
        yaw_range: Half range of the random object and EE yaws in degrees.
    """

    reward: RewardConfig = field(default_factory=RewardConfig)
    gripper: GripperModel = field(default_factory=GripperModel)
    curriculum: CurriculumConfig = field(default_factory=CurriculumConfig)
    max_steps: int = 50
    translation_step: float = 10.0
    rotation_step: float = 3.0
    retract_tolerance: float = 5.0
    eps_touch: float = 0.1
    workspace: tuple[float, float, float] = (1000.0, 1000.0, 300.0)
    yaw_range: float = 90.0

    def __post_init__(self) -> None:
        if self.max_steps < 1:
            raise ConfigError("env.max_steps must be >= 1")
        for name in ("translation_step", "rotation_step", "retract_tolerance"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"env.{name} must be > 0")
        if self.eps_touch < 0:
            raise ConfigError("env.eps_touch must be >= 0")
        if len(self.workspace) != 3 or min(self.workspace) <= 0:
            raise ConfigError("env.workspace must be three positive sizes")
        object.__setattr__(self, "workspace", tuple(float(v) for v in self.workspace))

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["workspace"] = list(self.workspace)
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "EnvConfig":
        _reject_unknown(cls, data, "env")
        data = dict(data)
        if "reward" in data:
            data["reward"] = RewardConfig.from_dict(data["reward"])
        if "gripper" in data:
            data["gripper"] = GripperModel.from_dict(data["gripper"])
        if "curriculum" in data:
            data["curriculum"] = CurriculumConfig.from_dict(data["curriculum"])
        if "workspace" in data:
            data["workspace"] = tuple(data["workspace"])
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "EnvConfig":
        """Read the ``env`` section (or a bare env object) from a JSON file."""
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls.from_dict(raw.get("env", raw))
