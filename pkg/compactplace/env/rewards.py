"""
Reward Terms.

Each episode step earns one task-state term plus the collision term:
a shaping penalty while placing, a one-off release reward, a retract
penalty after release, and a contact penalty whenever a contact fires.
"""

from __future__ import annotations

import math
from typing import Iterable

from compactplace.env.config import RewardConfig
from compactplace.models.episode import ContactType


def reward_q1(d_c: float, d_l: float, angle_diff_deg: float, cfg: RewardConfig) -> float:
    """
    Penalty while the object is held.

    Example:
        >>> reward_q1(0.02, 0.0, 0.0, RewardConfig())
        -0.002
    """
    return -cfg.alpha_n * (d_c + d_l) - cfg.alpha_theta * abs(angle_diff_deg) / 180.0


def reward_release(d_c: float, d_l: float, d_drop: float, cfg: RewardConfig) -> float:
    """
    Reward on the step the gripper opens.

    Vacuous constraints (no placed neighbor, no bordered line) count as
    distance 0 and earn their full term.
    """
    return (
        cfg.alpha_c * (1.0 - math.tanh(cfg.beta_c * d_c))
        + cfg.alpha_l * (1.0 - math.tanh(cfg.beta_l * d_l))
        - cfg.alpha_d * d_drop
    )


def reward_retract(object_displacement: float, goal_distance: float, cfg: RewardConfig) -> float:
    """
    Penalty after release.

    Args:
        object_displacement: Distance the placed object moved since it
            landed, in mm.
        goal_distance: Distance from the EE to the retract goal, in mm.
    """
    return (
        -cfg.alpha_m * object_displacement / cfg.d_norm
        - cfg.alpha_g * goal_distance / cfg.d_norm
    )


def reward_collision(contacts: Iterable[ContactType], cfg: RewardConfig) -> float:
    """Penalty of the highest-priority contact; 0 without contact."""
    contacts = sorted(set(contacts), key=lambda c: c.priority)
    if not contacts:
        return 0.0
    penalty = {
        ContactType.OBJECT_TABLE_OBJECT: cfg.alpha_col_o,
        ContactType.ROBOT_TABLE_OBJECT: cfg.alpha_col_r,
        ContactType.ROBOT_TABLE: cfg.alpha_col_t,
    }
    return -penalty[contacts[0]]
