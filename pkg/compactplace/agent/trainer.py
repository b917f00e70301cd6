"""
Curriculum Training Loop.

This module provides the Trainer, which runs placement episodes on a set
of layouts, feeds the replay buffer, updates the learner, evaluates the
deterministic policy and promotes the curriculum.

Observable attributes:
- curriculum_level: announced on every promotion
- eval_success_rate: announced after every evaluation
"""

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path
from typing import IO, Any, Sequence

import monotonic
import numpy as np

from compactplace.agent.checkpoint import load_checkpoint, save_checkpoint
from compactplace.agent.config import TrainConfig
from compactplace.agent.replay import ReplayBuffer
from compactplace.agent.tqc import TQCAgent
from compactplace.core.events import EventBus
from compactplace.core.exceptions import ConfigError
from compactplace.core.observer import HasObservers
from compactplace.env.config import EnvConfig
from compactplace.env.curriculum import CurriculumState, curriculum_update
from compactplace.env.placement_env import ACTION_SIZE, PlacementEnv
from compactplace.env.observation import OBS_SIZE
from compactplace.logs.handlers import get_progress_logger
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)
progress = get_progress_logger()

LOG_COLUMNS = (
    "step",
    "episode",
    "return",
    "success",
    "level",
    "critic_loss",
    "actor_loss",
    "alpha",
    "eval_success",
)


def _fmt(value: float | None) -> str:
    return "" if value is None or math.isnan(value) else f"{value:.6f}"


class Trainer(HasObservers):
    """
    Runs training on a fixed set of layouts.

    Args:
        layouts: Layouts to draw episodes from.
        out_dir: Directory for the training log and checkpoints.
        env_config: Environment settings.
        train_config: Learner settings.
        agent: Learner to continue; a fresh one when omitted.
        curriculum_level: Level to start at.
        steps: Environment steps already taken (resume).
        episodes: Episodes already finished (resume).
        event_bus: Bus for the training environment's step events.

    Example:
        >>> trainer = Trainer([layout], "runs/a", train_config=TrainConfig(total_steps=2000))
        >>> @trainer.on_attribute("curriculum_level")
        ... def promoted(_, name, level):
        ...     print("level", level)
        >>> trainer.train()
    """

    def __init__(
        self,
        layouts: Sequence[Layout],
        out_dir: str | Path,
        env_config: EnvConfig | None = None,
        train_config: TrainConfig | None = None,
        agent: TQCAgent | None = None,
        curriculum_level: int = 0,
        steps: int = 0,
        episodes: int = 0,
        event_bus: EventBus | None = None,
    ) -> None:
        super().__init__()
        if not layouts:
            raise ConfigError("training needs at least one layout")
        self.layouts = list(layouts)
        self.out_dir = Path(out_dir)
        self.env_config = env_config or EnvConfig()
        self.train_config = train_config or (agent.config if agent else TrainConfig())
        self.agent = agent or TQCAgent(OBS_SIZE, ACTION_SIZE, self.train_config)
        self.env = PlacementEnv(self.env_config, event_bus)
        self.eval_env = PlacementEnv(self.env_config)
        self.buffer = ReplayBuffer(self.train_config.buffer_size, OBS_SIZE, ACTION_SIZE)
        self.curriculum = CurriculumState.at_level(curriculum_level, self.env_config.curriculum)
        self.steps = steps
        self.episodes = episodes
        self.eval_success_rate = float("nan")
        self._episode_rng = np.random.default_rng([self.train_config.seed, 1, steps])
        self._diagnostics = {"critic_loss": float("nan"), "actor_loss": float("nan"), "alpha": self.agent.alpha}

    @classmethod
    def from_checkpoint(
        cls,
        path: str | Path,
        layouts: Sequence[Layout],
        out_dir: str | Path,
        total_steps: int | None = None,
        event_bus: EventBus | None = None,
    ) -> "Trainer":
        """
        Resume from a checkpoint; the replay buffer starts empty.

        Args:
            total_steps: New step budget; the stored one when omitted.
        """
        ckpt = load_checkpoint(path)
        train_config = ckpt.train_config
        if total_steps is not None:
            train_config = TrainConfig.from_dict({**train_config.to_dict(), "total_steps": total_steps})
        agent = ckpt.build_agent(train_config)
        logger.info("resuming from %s at step %d", path, ckpt.counters.get("steps", 0))
        return cls(
            layouts,
            out_dir,
            env_config=ckpt.env_config,
            train_config=train_config,
            agent=agent,
            curriculum_level=ckpt.curriculum_level,
            steps=ckpt.counters.get("steps", 0),
            episodes=ckpt.counters.get("episodes", 0),
            event_bus=event_bus,
        )

    @property
    def curriculum_level(self) -> int:
        return self.curriculum.level

    def _draw_episode(self, rng: np.random.Generator) -> tuple[Layout, int, int]:
        layout = self.layouts[int(rng.integers(len(self.layouts)))]
        index = int(rng.integers(len(layout.sequence)))
        return layout, index, int(rng.integers(2**31 - 1))

    def _reset(self) -> np.ndarray:
        layout, index, seed = self._draw_episode(self._episode_rng)
        return self.env.reset(layout, index, self.curriculum, seed)

    def evaluate(self, n_episodes: int | None = None) -> float:
        """
        Success rate of the deterministic policy at the current level.

        Episodes are drawn from a stream seeded by the step counter, so the
        same learner state always sees the same episodes.
        """
        n = n_episodes or self.train_config.eval_episodes
        rng = np.random.default_rng([self.train_config.seed, 2, self.steps])
        successes = 0
        for _ in range(n):
            layout, index, seed = self._draw_episode(rng)
            obs = self.eval_env.reset(layout, index, self.curriculum, seed)
            done = False
            info = None
            while not done:
                obs, _, done, info = self.eval_env.step(self.agent.act(obs, deterministic=True))
            successes += int(info.success)
        return successes / n

    def _checkpoint(self, name: str) -> Path:
        return save_checkpoint(
            self.out_dir / name,
            self.agent,
            self.env_config,
            self.curriculum.level,
            {"steps": self.steps, "episodes": self.episodes},
        )

    def _open_log(self) -> tuple[IO[str], Any]:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / "train_log.csv"
        fresh = not path.exists() or self.steps == 0
        handle = path.open("w" if fresh else "a", newline="", encoding="utf-8")
        writer = csv.writer(handle)
        if fresh:
            writer.writerow(LOG_COLUMNS)
        return handle, writer

    def train(self, total_steps: int | None = None) -> Path:
        """
        Train until ``total_steps`` environment steps have been taken.

        Returns:
            Path of the final checkpoint.
        """
        cfg = self.train_config
        total = total_steps or cfg.total_steps
        started = monotonic.monotonic()
        handle, writer = self._open_log()
        try:
            obs = self._reset()
            episode_return = 0.0
            while self.steps < total:
                if self.steps < cfg.warmup_steps:
                    action = self.agent.rng.uniform(-1.0, 1.0, size=ACTION_SIZE)
                else:
                    action = self.agent.explore_action(obs)
                next_obs, rewards, done, info = self.env.step(action)
                # time-limit truncation bootstraps
                terminal = done and (bool(info.contacts) or info.success)
                self.buffer.add(obs, action, rewards.total, next_obs, terminal)
                self.steps += 1
                episode_return += rewards.total

                if self.steps >= cfg.warmup_steps and len(self.buffer) >= cfg.batch_size:
                    batch = self.buffer.sample(cfg.batch_size, self.agent.rng)
                    self._diagnostics = self.agent.train_step(batch)

                if done:
                    self.episodes += 1
                    d = self._diagnostics
                    writer.writerow(
                        [
                            self.steps,
                            self.episodes,
                            f"{episode_return:.6f}",
                            int(info.success),
                            self.curriculum.level,
                            _fmt(d["critic_loss"]),
                            _fmt(d["actor_loss"]),
                            _fmt(d["alpha"]),
                            _fmt(self.eval_success_rate),
                        ]
                    )
                    obs = self._reset()
                    episode_return = 0.0
                else:
                    obs = next_obs

                if self.steps % cfg.eval_every == 0:
                    self._evaluate_and_promote(started)
        finally:
            handle.close()
        return self._checkpoint("final.pt")

    def _evaluate_and_promote(self, started: float) -> None:
        rate = self.evaluate()
        self.eval_success_rate = rate
        self.notify_attribute_listeners("eval_success_rate", rate)
        progress.info(
            "step %d level %d eval success %.2f (%.0fs)",
            self.steps,
            self.curriculum.level,
            rate,
            monotonic.monotonic() - started,
        )
        promoted = curriculum_update(self.curriculum, rate, self.env_config.curriculum)
        if promoted.level != self.curriculum.level:
            self.curriculum = promoted
            self.notify_attribute_listeners("curriculum_level", promoted.level, cache=True)
            self._checkpoint(f"level_{promoted.level:02d}.pt")
