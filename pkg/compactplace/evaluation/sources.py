"""
Assembly Sources.

A source turns a layout into an AssemblyResult:
- PolicySource: one deterministic policy episode per fragment
- PlanSource: a scripted plan run by the kinematic executor
- OracleSource: every fragment teleported to its layout pose
"""

from __future__ import annotations

import logging
import zlib
from typing import Callable

import numpy as np

from compactplace.baselines.executor import execute_plan
from compactplace.baselines.plan import PlacementPlan
from compactplace.core.types import Policy
from compactplace.env.config import EnvConfig
from compactplace.env.curriculum import CurriculumState
from compactplace.env.placement_env import PlacementEnv
from compactplace.models.assembly import AgentTag, AssemblyResult
from compactplace.models.geometry import Pose2
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)


def episode_seed(seed: int, layout_id: str, index: int) -> int:
    """Seed of the episode placing sequence entry ``index`` of a layout."""
    ss = np.random.SeedSequence([seed, zlib.crc32(layout_id.encode("utf-8")), index])
    return int(ss.generate_state(1)[0])


class PolicySource:
    """
    Assembles a layout with a placement policy.

    Fragments are placed in sequence order; each episode starts with the
    poses the earlier episodes produced. A fragment whose episode ends in
    contact before release stays off the table; one released before the
    contact keeps its landed pose and is still recorded as a collision,
    as in :py:func:`execute_plan`.

    Args:
        policy: Policy acting deterministically.
        env_config: Environment settings (NO-L when reference lines are off).
        tag: Tag recorded in the results.
        seed: Seed of the per-episode start yaws.
        curriculum_level: Start-height level; the last level when omitted.
    """

    __slots__ = ("_policy", "_env_config", "_tag", "_seed", "_curriculum")

    def __init__(
        self,
        policy: Policy,
        env_config: EnvConfig | None = None,
        tag: AgentTag | None = None,
        seed: int = 0,
        curriculum_level: int | None = None,
    ) -> None:
        self._policy = policy
        self._env_config = env_config or EnvConfig()
        if tag is None:
            tag = AgentTag.OUR if self._env_config.reward.use_reference_lines else AgentTag.NO_L
        self._tag = tag
        self._seed = seed
        level = self._env_config.curriculum.max_level if curriculum_level is None else curriculum_level
        self._curriculum = CurriculumState.at_level(level, self._env_config.curriculum)

    @property
    def tag(self) -> AgentTag:
        return self._tag

    def assemble(self, layout: Layout) -> AssemblyResult:
        env = PlacementEnv(self._env_config)
        result = AssemblyResult(
            layout_id=layout.layout_id,
            agent=self._tag,
            metadata={"curriculum_level": self._curriculum.level},
        )
        table: dict[int, Pose2] = {}
        for index, fid in enumerate(layout.sequence):
            result.placement_order.append(fid)
            obs = env.reset(
                layout,
                index,
                self._curriculum,
                episode_seed(self._seed, layout.layout_id, index),
                table_poses=table,
            )
            done = False
            info = None
            while not done:
                obs, _, done, info = env.step(self._policy.act(obs, deterministic=True))
            if fid in info.final_poses:
                table[fid] = info.final_poses[fid]
                result.placed_poses[fid] = table[fid]
            if info.contacts:
                result.collision_events.append((fid, info.contacts[0]))
            result.success[fid] = info.success
        return result


class PlanSource:
    """
    Assembles a layout by planning and executing a scripted plan.

    Args:
        planner: Callable producing a plan for a layout.
        tag: Tag recorded in the results.
        env_config: Executor settings.
    """

    __slots__ = ("_planner", "_tag", "_env_config")

    def __init__(
        self,
        planner: Callable[[Layout], PlacementPlan],
        tag: AgentTag,
        env_config: EnvConfig | None = None,
    ) -> None:
        self._planner = planner
        self._tag = tag
        self._env_config = env_config or EnvConfig()

    @property
    def tag(self) -> AgentTag:
        return self._tag

    def assemble(self, layout: Layout) -> AssemblyResult:
        plan = self._planner(layout)
        plan.validate(layout)
        return execute_plan(plan, layout, self._env_config)


class OracleSource:
    """Teleports every fragment to its layout pose."""

    __slots__ = ()

    @property
    def tag(self) -> AgentTag:
        return AgentTag.ORACLE

    def assemble(self, layout: Layout) -> AssemblyResult:
        return AssemblyResult(
            layout_id=layout.layout_id,
            agent=AgentTag.ORACLE,
            placed_poses=layout.layout_poses(),
            success={fid: True for fid in layout.sequence},
            placement_order=list(layout.sequence),
        )
