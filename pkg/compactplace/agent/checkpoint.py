"""
Checkpoint Files.

A checkpoint holds the learner's parameters and optimizer states, the
temperature, the curriculum level, the trainer counters and the RNG
state. Files are written with torch.save and read back with
``weights_only=True``; the RNG state travels as a JSON string.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import torch

from compactplace.agent.config import TrainConfig
from compactplace.agent.tqc import TQCAgent
from compactplace.core.exceptions import CheckpointError, ConfigError
from compactplace.env.config import EnvConfig

logger = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1
CHECKPOINT_FORMAT = "compactplace-checkpoint"


@dataclass
class Checkpoint:
    """
    Contents of a checkpoint file.

    Attributes:
        agent_state: TQCAgent.state_dict() output.
        rng_state: TQCAgent.rng_state() output.
        train_config: Learner settings the agent was built with.
        env_config: Environment settings of the run.
        obs_dim: Observation size.
        action_dim: Action size.
        curriculum_level: Level reached.
        counters: Trainer counters (steps, episodes).
    """

    agent_state: dict[str, Any]
    rng_state: dict[str, Any]
    train_config: TrainConfig
    env_config: EnvConfig
    obs_dim: int
    action_dim: int
    curriculum_level: int = 0
    counters: dict[str, int] = field(default_factory=dict)

    def build_agent(self, train_config: TrainConfig | None = None) -> TQCAgent:
        """
        A TQCAgent with the stored parameters and RNG state.

        Args:
            train_config: Settings to build the agent with; the stored ones
                when omitted.

        Raises:
            CheckpointError: If the stored parameters do not fit the
                networks described by ``train_config``.
        """
        agent = TQCAgent(self.obs_dim, self.action_dim, train_config or self.train_config)
        try:
            agent.load_state_dict(self.agent_state)
        except (RuntimeError, KeyError, ValueError) as exc:
            raise CheckpointError(f"checkpoint parameters do not fit the network: {exc}") from exc
        agent.set_rng_state(self.rng_state)
        return agent


def save_checkpoint(
    path: str | Path,
    agent: TQCAgent,
    env_config: EnvConfig,
    curriculum_level: int = 0,
    counters: dict[str, int] | None = None,
) -> Path:
    """Write a checkpoint for ``agent``; parent directories are created."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "obs_dim": agent.obs_dim,
        "action_dim": agent.action_dim,
        "train_config": json.dumps(agent.config.to_dict()),
        "env_config": json.dumps(env_config.to_dict()),
        "curriculum_level": int(curriculum_level),
        "counters": dict(counters or {}),
        "agent": agent.state_dict(),
        "rng": json.dumps(agent.rng_state()),
    }
    torch.save(payload, path)
    logger.info("saved checkpoint %s (level %d)", path, curriculum_level)
    return path


def load_checkpoint(path: str | Path) -> Checkpoint:
    """
    Read a checkpoint.

    Raises:
        CheckpointError: If the file is missing, unreadable, of another
            format or version, or carries invalid settings.
    """
    path = Path(path)
    if not path.is_file():
        raise CheckpointError(f"checkpoint {path} does not exist")
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as exc:
        raise CheckpointError(f"checkpoint {path} is unreadable: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{path} is not a compactplace checkpoint")
    if payload.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"checkpoint version {payload.get('version')} is not supported "
            f"(expected {CHECKPOINT_VERSION})"
        )
    try:
        return Checkpoint(
            agent_state=payload["agent"],
            rng_state=json.loads(payload["rng"]),
            train_config=TrainConfig.from_dict(json.loads(payload["train_config"])),
            env_config=EnvConfig.from_dict(json.loads(payload["env_config"])),
            obs_dim=int(payload["obs_dim"]),
            action_dim=int(payload["action_dim"]),
            curriculum_level=int(payload["curriculum_level"]),
            counters={k: int(v) for k, v in payload["counters"].items()},
        )
    except (KeyError, TypeError, ValueError, ConfigError) as exc:
        raise CheckpointError(f"checkpoint {path} is incomplete: {exc}") from exc
