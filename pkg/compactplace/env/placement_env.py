"""
Placement Environment.

This module provides the kinematic environment in which one fragment is
placed next to the fragments that precede it in the assembly sequence.

Task states:
- GRASP: instantaneous; reset attaches the object to the gripper
- PLACE: the object moves rigidly with the EE until the gripper opens
- RETRACT: the object rests on the table; the EE rises to the retract goal
- RESET: the episode is over
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Mapping

import monotonic
import numpy as np

from compactplace.core.events import EpisodeEndEvent, EventBus, StepEvent
from compactplace.core.exceptions import EpisodeError
from compactplace.env.collisions import check_collisions
from compactplace.env.config import EnvConfig
from compactplace.env.constraints import (
    angle_error,
    corner_distance_dc,
    drop_height,
    line_distance_dl,
)
from compactplace.env.curriculum import CurriculumState
from compactplace.env.observation import OBS_SIZE, build_observation, workspace_bounds
from compactplace.env.rewards import (
    reward_collision,
    reward_q1,
    reward_release,
    reward_retract,
)
from compactplace.models.episode import (
    Action,
    EEState,
    EnvState,
    GraspState,
    RewardBreakdown,
    StepInfo,
    TaskState,
)
from compactplace.models.geometry import Point3, Pose2, wrap_angle
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)

ACTION_SIZE = 5


def grasp_extents(shape_coords: np.ndarray, yaw_offset: float) -> tuple[float, float]:
    """Object extent along the gripper's closing axis for a given object-to-EE yaw."""
    rad = np.deg2rad(yaw_offset)
    u = shape_coords[:, 0] * np.cos(rad) - shape_coords[:, 1] * np.sin(rad)
    return float(u.min()), float(u.max())


class PlacementEnv:
    """
    Kinematic single-object placement environment.

    Args:
        config: Environment settings.
        event_bus: Bus receiving StepEvent and EpisodeEndEvent; a private
            bus is created when omitted.

    Example:
        >>> env = PlacementEnv()
        >>> obs = env.reset(layout, placing_index=1, seed=7)
        >>> obs, rewards, done, info = env.step(np.zeros(5))
    """

    __slots__ = (
        "_config",
        "_events",
        "_layout",
        "_state",
        "_curriculum",
        "_bounds",
        "_done",
        "_success",
        "_return",
    )

    observation_size = OBS_SIZE
    action_size = ACTION_SIZE

    def __init__(self, config: EnvConfig | None = None, event_bus: EventBus | None = None) -> None:
        self._config = config or EnvConfig()
        self._events = event_bus or EventBus()
        self._layout: Layout | None = None
        self._state: EnvState | None = None
        self._curriculum: CurriculumState | None = None
        self._bounds: tuple[np.ndarray, np.ndarray] | None = None
        self._done = True
        self._success = False
        self._return = 0.0

    @property
    def config(self) -> EnvConfig:
        return self._config

    @property
    def events(self) -> EventBus:
        """Bus the environment publishes to."""
        return self._events

    @property
    def state(self) -> EnvState:
        if self._state is None:
            raise EpisodeError("environment has not been reset")
        return self._state

    @property
    def layout(self) -> Layout:
        if self._layout is None:
            raise EpisodeError("environment has not been reset")
        return self._layout

    @property
    def done(self) -> bool:
        return self._done

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Workspace box of the current layout."""
        if self._bounds is None:
            raise EpisodeError("environment has not been reset")
        return self._bounds

    def reset(
        self,
        layout: Layout,
        placing_index: int,
        curriculum: CurriculumState | int | None = None,
        seed: int = 0,
        table_poses: Mapping[int, Pose2] | None = None,
    ) -> np.ndarray:
        """
        Start an episode placing the fragment at ``placing_index``.

        Args:
            layout: Layout to assemble.
            placing_index: Index into the assembly sequence.
            curriculum: Curriculum state or level; level 0 when omitted.
            seed: Seed of the random object and EE yaws.
            table_poses: Poses of the table objects; the layout poses of the
                preceding fragments when omitted.

        Returns:
            The first observation.

        Raises:
            EpisodeError: If ``placing_index`` is outside the sequence.
        """
        if not 0 <= placing_index < len(layout.sequence):
            raise EpisodeError(
                f"placing index {placing_index} outside sequence of length {len(layout.sequence)}"
            )
        cfg = self._config
        if curriculum is None or isinstance(curriculum, int):
            curriculum = CurriculumState.at_level(curriculum or 0, cfg.curriculum)

        rng = np.random.default_rng(seed)
        theta_place = float(rng.uniform(-cfg.yaw_range, cfg.yaw_range))
        theta_ee = float(rng.uniform(-cfg.yaw_range, cfg.yaw_range))

        fragment = layout.fragment(layout.sequence[placing_index])
        if table_poses is None:
            table = {fid: layout.fragment(fid).layout_pose for fid in layout.sequence[:placing_index]}
        else:
            table = dict(table_poses)
            table.pop(fragment.id, None)

        self._layout = layout
        self._bounds = workspace_bounds(layout, cfg)
        lo, hi = self._bounds
        center = 0.5 * (lo + hi)
        target = fragment.layout_pose
        t = curriculum.fraction
        x = float(np.clip((1.0 - t) * target.x + t * center[0], lo[0], hi[0]))
        y = float(np.clip((1.0 - t) * target.y + t * center[1], lo[1], hi[1]))
        rest = cfg.gripper.rest_height
        ee_z = min(curriculum.ee_start_height + rest, float(hi[2]))

        yaw_offset = wrap_angle(theta_place - theta_ee)
        u_min, u_max = grasp_extents(fragment.shape.coords, yaw_offset)
        if u_max - u_min > cfg.gripper.opening_width_open:
            logger.warning(
                "fragment %d grasp width %.1f exceeds gripper opening %.1f",
                fragment.id,
                u_max - u_min,
                cfg.gripper.opening_width_open,
            )

        self._state = EnvState(
            q=TaskState.PLACE,
            ee=EEState(x, y, ee_z, theta_ee, gripper_open=False),
            placing_id=fragment.id,
            placing_pose=Pose2(x, y, theta_place),
            object_bottom=ee_z - rest,
            table_poses=table,
            grasp=GraspState(yaw_offset, u_min, u_max),
            curriculum_level=curriculum.level,
            episode_seed=seed,
        )
        self._curriculum = curriculum
        self._done = False
        self._success = False
        self._return = 0.0
        logger.debug("reset layout %s fragment %d seed %d", layout.layout_id, fragment.id, seed)
        return self.observation()

    def observation(self) -> np.ndarray:
        """Observation of the current state."""
        return build_observation(self.state, self.layout, self._config, self._bounds)

    def corner_distance_dc(self) -> float:
        """Normalized corner distance of the current state."""
        return corner_distance_dc(self.state, self.layout, self._config.reward)

    def line_distance_dl(self) -> float:
        """Normalized line distance of the current state."""
        return line_distance_dl(self.state, self.layout, self._config.reward)

    def _move(self, action: Action) -> None:
        cfg = self._config
        s = self.state
        lo, hi = self.bounds
        ee = s.ee
        x = float(np.clip(ee.x + action.dx * cfg.translation_step, lo[0], hi[0]))
        y = float(np.clip(ee.y + action.dy * cfg.translation_step, lo[1], hi[1]))
        z = float(np.clip(ee.z + action.dz * cfg.translation_step, lo[2], hi[2]))
        theta = wrap_angle(ee.theta + action.dtheta * cfg.rotation_step)
        if s.q == TaskState.PLACE:
            # the table supports the grasped object
            rest = cfg.gripper.rest_height
            z = max(z, rest)
            s.placing_pose = Pose2(x, y, theta + s.grasp.yaw_offset)
            s.object_bottom = z - rest
        s.ee = replace(ee, x=x, y=y, z=z, theta=theta)

    def _release(self) -> float:
        s = self.state
        cfg = self._config
        d_drop = drop_height(s, cfg.reward)
        s.object_bottom = 0.0
        s.table_poses[s.placing_id] = s.placing_pose
        s.drop_point = s.ee.position
        goal_z = min(s.ee.z + self._curriculum.retract_height, float(self.bounds[1][2]))
        s.retract_goal = Point3(s.ee.x, s.ee.y, goal_z)
        s.landed_position = Point3(s.placing_pose.x, s.placing_pose.y, 0.0)
        s.ee = replace(s.ee, gripper_open=True)
        d_c = corner_distance_dc(s, self.layout, cfg.reward)
        d_l = line_distance_dl(s, self.layout, cfg.reward)
        s.q = TaskState.RETRACT
        return reward_release(d_c, d_l, d_drop, cfg.reward)

    def step(
        self, action: Action | np.ndarray
    ) -> tuple[np.ndarray, RewardBreakdown, bool, StepInfo]:
        """
        Apply one action.

        Returns:
            (observation, reward components, done, step diagnostics).

        Raises:
            EpisodeError: If the episode is already done.
        """
        if self._state is None or self._done:
            raise EpisodeError("step called on a finished episode; call reset first")
        cfg = self._config
        layout = self.layout
        s = self._state
        action = (action if isinstance(action, Action) else Action.from_array(action)).clamped()

        s.step += 1
        self._move(action)

        r_q1 = r_q12 = r_q2 = 0.0
        d_c = d_l = 0.0
        released = False
        if s.q == TaskState.PLACE and action.open_cmd > 0:
            r_q12 = self._release()
            released = True

        contacts = check_collisions(s, layout, cfg)

        if s.q == TaskState.PLACE:
            d_c = corner_distance_dc(s, layout, cfg.reward)
            d_l = line_distance_dl(s, layout, cfg.reward)
            r_q1 = reward_q1(d_c, d_l, angle_error(s, layout), cfg.reward)
        elif s.q == TaskState.RETRACT and not released:
            placed = s.table_poses[s.placing_id]
            displacement = float(np.hypot(placed.x - s.landed_position.x, placed.y - s.landed_position.y))
            r_q2 = reward_retract(
                displacement, s.ee.position.distance_to(s.retract_goal), cfg.reward
            )
        r_col = reward_collision(contacts, cfg.reward)
        rewards = RewardBreakdown(r_q1=r_q1, r_q12=r_q12, r_q2=r_q2, r_col=r_col)

        at_goal = (
            s.q == TaskState.RETRACT
            and not released
            and s.ee.position.distance_to(s.retract_goal) <= cfg.retract_tolerance
        )
        done = bool(contacts) or at_goal or s.step >= cfg.max_steps
        success = at_goal and not contacts

        if done and s.q == TaskState.PLACE and not contacts:
            logger.warning("episode %d timed out before release", s.episode_seed)
            s.table_poses[s.placing_id] = s.placing_pose

        self._return += rewards.total
        now = monotonic.monotonic()
        ee = s.ee
        if done:
            s.q = TaskState.RESET
            self._done = True
            self._success = success
        self._events.publish(
            StepEvent(
                timestamp=now,
                episode_seed=s.episode_seed,
                step=s.step,
                q=int(s.q),
                ee=(ee.x, ee.y, ee.z, ee.theta),
                action=tuple(float(v) for v in action.as_array()),
                rewards=rewards.as_tuple(),
                contacts=tuple(c.value for c in contacts),
            )
        )
        if done:
            self._events.publish(
                EpisodeEndEvent(
                    timestamp=now,
                    episode_seed=s.episode_seed,
                    placing_id=s.placing_id,
                    steps=s.step,
                    success=success,
                    total_return=self._return,
                )
            )

        info = StepInfo(
            contacts=contacts,
            success=success,
            released=s.drop_point is not None,
            final_poses=dict(s.table_poses),
            d_c=d_c,
            d_l=d_l,
        )
        return self.observation(), rewards, done, info
