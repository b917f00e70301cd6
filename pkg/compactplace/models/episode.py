"""
Episode Data Models.

This module provides the state, action and reward types of the
placement environment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Sequence

import numpy as np

from compactplace.core.exceptions import GeometryError
from compactplace.models.geometry import Point3, Pose2, wrap_angle


class TaskState(IntEnum):
    """Episode phase."""

    GRASP = 0
    PLACE = 1
    RETRACT = 2
    RESET = 3


class ContactType(str, Enum):
    """
    Contact classes, ordered by penalty priority.

    Attributes:
        OBJECT_TABLE_OBJECT: Placing object against a table object.
        ROBOT_TABLE_OBJECT: Gripper against a table object.
        ROBOT_TABLE: Gripper below the table plane.
    """

    OBJECT_TABLE_OBJECT = "o_place<->o_table"
    ROBOT_TABLE_OBJECT = "robot<->o_table"
    ROBOT_TABLE = "robot<->table"

    @property
    def priority(self) -> int:
        return _CONTACT_PRIORITY[self]


_CONTACT_PRIORITY = {
    ContactType.OBJECT_TABLE_OBJECT: 0,
    ContactType.ROBOT_TABLE_OBJECT: 1,
    ContactType.ROBOT_TABLE: 2,
}


@dataclass(frozen=True)
class EEState:
    """
    End-effector pose and gripper flag.

    The EE point is the finger root; the fingertips hang
    ``finger_length`` below it.

    Attributes:
        x: X position in millimeters.
        y: Y position in millimeters.
        z: Height above the table plane in millimeters.
        theta: Yaw in degrees, wrapped to [-180, 180).
        gripper_open: Whether the fingers are open.
    """

    x: float
    y: float
    z: float
    theta: float = 0.0
    gripper_open: bool = False

    def __post_init__(self) -> None:
        if not np.all(np.isfinite([self.x, self.y, self.z, self.theta])):
            raise GeometryError("EE state has non-finite values")
        if self.z < 0.0:
            raise GeometryError(f"EE z must be >= 0, got {self.z}")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    def __str__(self) -> str:
        return (
            f"{self.__class__.__name__}:x={self.x},y={self.y},z={self.z},"
            f"theta={self.theta},open={self.gripper_open}"
        )

    @property
    def position(self) -> Point3:
        return Point3(self.x, self.y, self.z)


@dataclass(frozen=True)
class Action:
    """
    One incremental action; every component lies in [-1, 1] after clamping.

    Attributes:
        dx: Translation along x, scaled by the translation step.
        dy: Translation along y, scaled by the translation step.
        dz: Translation along z, scaled by the translation step.
        dtheta: Yaw change, scaled by the rotation step.
        open_cmd: Opens the gripper when > 0 while placing.
    """

    dx: float = 0.0
    dy: float = 0.0
    dz: float = 0.0
    dtheta: float = 0.0
    open_cmd: float = -1.0

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Action":
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.shape != (5,):
            raise ValueError(f"action needs 5 components, got {values.shape}")
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array([self.dx, self.dy, self.dz, self.dtheta, self.open_cmd])

    def clamped(self) -> "Action":
        return Action.from_array(np.clip(np.nan_to_num(self.as_array()), -1.0, 1.0))


@dataclass(frozen=True)
class GraspState:
    """
    Rigid attachment of the placing object to the gripper.

    Attributes:
        yaw_offset: Object yaw minus EE yaw in degrees.
        u_min: Smallest object coordinate along the closing axis, gripper frame.
        u_max: Largest object coordinate along the closing axis, gripper frame.
    """

    yaw_offset: float
    u_min: float
    u_max: float


@dataclass
class EnvState:
    """
    Full state of one placement episode.

    Attributes:
        q: Task state.
        ee: End-effector state.
        placing_id: Id of the fragment being placed.
        placing_pose: Planar pose of the placing object.
        object_bottom: Height of the placing object's bottom face in mm.
        table_poses: Poses of the table objects by id.
        step: Steps taken so far.
        curriculum_level: Curriculum level the episode was reset with.
        episode_seed: Seed of the episode.
        grasp: Attachment geometry.
        drop_point: EE position at release (set once q >= 2).
        retract_goal: Target EE position after release (set once q >= 2).
        landed_position: Placing object centroid where it landed.
    """

    q: TaskState
    ee: EEState
    placing_id: int
    placing_pose: Pose2
    object_bottom: float
    table_poses: dict[int, Pose2]
    grasp: GraspState
    step: int = 0
    curriculum_level: int = 0
    episode_seed: int = 0
    drop_point: Point3 | None = None
    retract_goal: Point3 | None = None
    landed_position: Point3 | None = None


@dataclass(frozen=True)
class RewardBreakdown:
    """
    Reward components of one step; ``total`` is their sum.

    At most one of the task-state components is nonzero in a step.
    """

    r_q1: float = 0.0
    r_q12: float = 0.0
    r_q2: float = 0.0
    r_col: float = 0.0

    def __str__(self) -> str:
        return (
            f"{self.__class__.__name__}:r_q1={self.r_q1:.6f},r_q12={self.r_q12:.6f},"
            f"r_q2={self.r_q2:.6f},r_col={self.r_col:.6f}"
        )

    @property
    def total(self) -> float:
        return self.r_q1 + self.r_q12 + self.r_q2 + self.r_col

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.r_q1, self.r_q12, self.r_q2, self.r_col, self.total)


@dataclass
class StepInfo:
    """
    Diagnostics returned with every step.

    Attributes:
        contacts: Contacts detected after the motion, highest priority first.
        success: Whether the episode ended at the retract goal without contact.
        released: Whether the placing object has been released.
        final_poses: Table poses at the end of the step (placing object
            included once released).
        d_c: Normalized corner distance at the step.
        d_l: Normalized line distance at the step.
    """

    contacts: tuple[ContactType, ...] = ()
    success: bool = False
    released: bool = False
    final_poses: dict[int, Pose2] = field(default_factory=dict)
    d_c: float = 0.0
    d_l: float = 0.0
