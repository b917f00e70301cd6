"""
Placement Learner.

This module provides the truncated-quantile actor-critic learner:
- Policy and quantile critic networks
- Replay buffer
- Target construction, losses and updates
- Curriculum training loop and checkpoints
"""

from compactplace.agent.config import TrainConfig
from compactplace.agent.networks import (
    LOG_STD_MAX,
    LOG_STD_MIN,
    CriticNet,
    PolicyNet,
    mlp,
    squash_correction,
)
from compactplace.agent.replay import Batch, ReplayBuffer
from compactplace.agent.tqc import (
    TQCAgent,
    actor_loss,
    quantile_huber_loss,
    quantile_midpoints,
    soft_update,
    truncated_mean,
    truncated_target,
)
from compactplace.agent.checkpoint import (
    CHECKPOINT_VERSION,
    Checkpoint,
    load_checkpoint,
    save_checkpoint,
)
from compactplace.agent.trainer import LOG_COLUMNS, Trainer

__all__ = [
    "TrainConfig",
    # Networks
    "LOG_STD_MIN",
    "LOG_STD_MAX",
    "mlp",
    "squash_correction",
    "PolicyNet",
    "CriticNet",
    # Replay
    "Batch",
    "ReplayBuffer",
    # Learner
    "truncated_target",
    "quantile_midpoints",
    "quantile_huber_loss",
    "truncated_mean",
    "actor_loss",
    "soft_update",
    "TQCAgent",
    # Checkpoints
    "CHECKPOINT_VERSION",
    "Checkpoint",
    "save_checkpoint",
    "load_checkpoint",
    # Training
    "LOG_COLUMNS",
    "Trainer",
]
