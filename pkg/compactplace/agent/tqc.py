"""
Truncated Quantile Critics.

This module provides the distributional actor-critic learner: truncated
target construction, the quantile Huber loss, the actor loss and the
TQCAgent holding networks, optimizers and RNG streams.
"""

from __future__ import annotations

import copy
import logging
import math
from typing import Any

import numpy as np
import torch

from compactplace.agent.config import TrainConfig
from compactplace.agent.networks import CriticNet, PolicyNet
from compactplace.agent.replay import Batch
from compactplace.core.exceptions import TrainingError

logger = logging.getLogger(__name__)


def truncated_target(
    next_quantiles: torch.Tensor,
    rewards: torch.Tensor,
    dones: torch.Tensor,
    gamma: float,
    entropy_term: torch.Tensor,
    drop_total: int,
) -> torch.Tensor:
    """
    Bootstrapped target atoms.

    Pools all critics' quantiles, sorts them ascending and keeps the lowest
    ``n_critics * n_quantiles - drop_total``.

    Args:
        next_quantiles: Target-critic quantiles at the next state, (B, N, M).
        rewards: Rewards, (B,).
        dones: Terminal flags as floats, (B,).
        gamma: Discount.
        entropy_term: alpha * log_prob of the next action, (B,).
        drop_total: Atoms dropped from the top of the pool.

    Returns:
        Target atoms, (B, N * M - drop_total).
    """
    pooled = next_quantiles.reshape(next_quantiles.shape[0], -1)
    kept = torch.sort(pooled, dim=1).values[:, : pooled.shape[1] - drop_total]
    return rewards[:, None] + gamma * (1.0 - dones[:, None]) * (kept - entropy_term[:, None])


def quantile_midpoints(n_quantiles: int, dtype: torch.dtype = torch.float32) -> torch.Tensor:
    """Quantile fractions (2i - 1) / 2M for i = 1..M."""
    return (torch.arange(n_quantiles, dtype=dtype) + 0.5) / n_quantiles


def quantile_huber_loss(pred: torch.Tensor, target: torch.Tensor, kappa: float = 1.0) -> torch.Tensor:
    """
    Quantile Huber loss between predicted quantiles and target atoms.

    Summed over the quantile dimension, averaged over batch, critics and
    atoms.

    Args:
        pred: Predicted quantiles, (B, N, M).
        target: Target atoms, (B, K).
        kappa: Huber threshold.

    Example:
        Quantiles [0, 2] against the single atom 1 give 0.25.
    """
    diff = target[:, None, None, :] - pred[:, :, :, None]
    abs_diff = diff.abs()
    huber = torch.where(abs_diff <= kappa, 0.5 * diff**2, kappa * (abs_diff - 0.5 * kappa))
    tau = quantile_midpoints(pred.shape[-1], pred.dtype)[None, None, :, None]
    weight = (tau - (diff < 0).to(pred.dtype)).abs()
    return (weight * huber).sum(dim=2).mean()


def truncated_mean(quantiles: torch.Tensor, drop_total: int) -> torch.Tensor:
    """Mean of the pooled quantiles after dropping the top ``drop_total``, (B,)."""
    pooled = quantiles.reshape(quantiles.shape[0], -1)
    kept = torch.sort(pooled, dim=1).values[:, : pooled.shape[1] - drop_total]
    return kept.mean(dim=1)


def actor_loss(
    policy: PolicyNet,
    critic: CriticNet,
    obs: torch.Tensor,
    alpha: torch.Tensor | float,
    drop_total: int,
    noise: torch.Tensor | None = None,
) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Entropy-regularized actor objective.

    Returns:
        (loss, log-probabilities of the sampled actions).
    """
    action, log_prob = policy.sample(obs, noise=noise)
    value = truncated_mean(critic(obs, action), drop_total)
    return (alpha * log_prob - value).mean(), log_prob


def soft_update(online: torch.nn.Module, target: torch.nn.Module, tau: float) -> None:
    """target <- (1 - tau) * target + tau * online, parameter-wise."""
    with torch.no_grad():
        for p_t, p in zip(target.parameters(), online.parameters()):
            p_t.mul_(1.0 - tau).add_(p, alpha=tau)


class TQCAgent:
    """
    Actor, critics, target critics and temperature with their optimizers.

    Args:
        obs_dim: Observation size.
        action_dim: Action size.
        config: Learner settings.

    Example:
        >>> agent = TQCAgent(58, 5, TrainConfig(seed=3))
        >>> action = agent.act(obs)
    """

    __slots__ = (
        "_config",
        "obs_dim",
        "action_dim",
        "policy",
        "critic",
        "critic_target",
        "log_alpha",
        "target_entropy",
        "policy_optimizer",
        "critic_optimizer",
        "alpha_optimizer",
        "rng",
        "generator",
        "updates",
    )

    def __init__(self, obs_dim: int, action_dim: int, config: TrainConfig | None = None) -> None:
        self._config = config or TrainConfig()
        cfg = self._config
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        with torch.random.fork_rng():
            torch.manual_seed(cfg.seed)
            self.policy = PolicyNet(obs_dim, action_dim, cfg.hidden)
            self.critic = CriticNet(obs_dim, action_dim, cfg.hidden, cfg.n_critics, cfg.n_quantiles)
        self.critic_target = copy.deepcopy(self.critic)
        for p in self.critic_target.parameters():
            p.requires_grad_(False)
        self.log_alpha = torch.tensor(math.log(cfg.initial_alpha), requires_grad=True)
        self.target_entropy = -float(action_dim)
        self.policy_optimizer = torch.optim.Adam(self.policy.parameters(), lr=cfg.learning_rate)
        self.critic_optimizer = torch.optim.Adam(self.critic.parameters(), lr=cfg.learning_rate)
        self.alpha_optimizer = torch.optim.Adam([self.log_alpha], lr=cfg.learning_rate)
        self.rng = np.random.default_rng(cfg.seed)
        self.generator = torch.Generator().manual_seed(cfg.seed)
        self.updates = 0

    @property
    def config(self) -> TrainConfig:
        return self._config

    @property
    def alpha(self) -> float:
        """Current entropy temperature; 0 when entropy tuning is off."""
        if not self._config.use_entropy:
            return 0.0
        return float(self.log_alpha.exp().item())

    def _noise(self, shape: tuple[int, ...]) -> torch.Tensor:
        return torch.randn(shape, generator=self.generator)

    def forward_policy(self, obs: np.ndarray, deterministic: bool = False) -> tuple[np.ndarray, float]:
        """
        Action in [-1, 1]^5 and its log-probability for one observation.

        Raises:
            TrainingError: If the policy parameters are not finite.
        """
        x = torch.as_tensor(np.asarray(obs, dtype=np.float32))[None, :]
        with torch.no_grad():
            noise = None if deterministic else self._noise((1, self.action_dim))
            action, log_prob = self.policy.sample(x, deterministic=deterministic, noise=noise)
        if not torch.isfinite(action).all():
            raise TrainingError("policy produced non-finite actions")
        return action[0].numpy().astype(np.float64), float(log_prob[0])

    def act(self, obs: np.ndarray, deterministic: bool = True) -> np.ndarray:
        return self.forward_policy(obs, deterministic)[0]

    def explore_action(self, obs: np.ndarray, sigma: float | None = None) -> np.ndarray:
        """Policy sample plus Gaussian noise, clamped to [-1, 1]."""
        cfg = self._config
        action, _ = self.forward_policy(obs, deterministic=False)
        sigma = cfg.exploration_sigma if sigma is None else sigma
        if cfg.use_exploration_noise and sigma > 0:
            action = action + self.rng.normal(0.0, sigma, size=action.shape)
        return np.clip(action, -1.0, 1.0)

    def tqc_target(self, batch: Batch) -> torch.Tensor:
        """Truncated target atoms of a batch, (B, N * M - drop)."""
        cfg = self._config
        next_obs = torch.as_tensor(batch.next_obs)
        with torch.no_grad():
            next_action, next_log_prob = self.policy.sample(
                next_obs, noise=self._noise((len(batch), self.action_dim))
            )
            next_q = self.critic_target(next_obs, next_action)
            ent = self.log_alpha.exp() * next_log_prob if cfg.use_entropy else torch.zeros_like(next_log_prob)
            return truncated_target(
                next_q,
                torch.as_tensor(batch.rewards),
                torch.as_tensor(batch.dones),
                cfg.gamma,
                ent,
                cfg.drop_total,
            )

    def train_step(self, batch: Batch) -> dict[str, float]:
        """
        One critic, actor and temperature update plus the soft target update.

        Returns:
            Diagnostics with critic_loss, actor_loss and alpha.

        Raises:
            TrainingError: If a loss is not finite.
        """
        cfg = self._config
        obs = torch.as_tensor(batch.obs)
        actions = torch.as_tensor(batch.actions)

        target = self.tqc_target(batch)
        c_loss = quantile_huber_loss(self.critic(obs, actions), target)
        self._check_finite("critic_loss", c_loss)
        self.critic_optimizer.zero_grad()
        c_loss.backward()
        self.critic_optimizer.step()

        alpha = self.log_alpha.exp().detach() if cfg.use_entropy else 0.0
        a_loss, log_prob = actor_loss(
            self.policy,
            self.critic,
            obs,
            alpha,
            cfg.drop_total,
            noise=self._noise((len(batch), self.action_dim)),
        )
        self._check_finite("actor_loss", a_loss, critic_loss=float(c_loss))
        self.policy_optimizer.zero_grad()
        a_loss.backward()
        self.policy_optimizer.step()

        if cfg.use_entropy:
            alpha_loss = -(self.log_alpha * (log_prob.detach() + self.target_entropy)).mean()
            self.alpha_optimizer.zero_grad()
            alpha_loss.backward()
            self.alpha_optimizer.step()

        self.soft_update()
        self.updates += 1
        return {"critic_loss": float(c_loss), "actor_loss": float(a_loss), "alpha": self.alpha}

    def _check_finite(self, name: str, loss: torch.Tensor, **extra: float) -> None:
        if not torch.isfinite(loss).all():
            diagnostics = {name: float(loss), "alpha": self.alpha, "updates": self.updates, **extra}
            logger.error("non-finite %s at update %d", name, self.updates)
            raise TrainingError(f"non-finite {name} at update {self.updates}", diagnostics)

    def soft_update(self, tau: float | None = None) -> None:
        soft_update(self.critic, self.critic_target, self._config.tau if tau is None else tau)

    def state_dict(self) -> dict[str, Any]:
        """Parameters and optimizer states."""
        return {
            "policy": self.policy.state_dict(),
            "critic": self.critic.state_dict(),
            "critic_target": self.critic_target.state_dict(),
            "log_alpha": self.log_alpha.detach().clone(),
            "policy_optimizer": self.policy_optimizer.state_dict(),
            "critic_optimizer": self.critic_optimizer.state_dict(),
            "alpha_optimizer": self.alpha_optimizer.state_dict(),
            "updates": self.updates,
        }

    def load_state_dict(self, state: dict[str, Any]) -> None:
        self.policy.load_state_dict(state["policy"])
        self.critic.load_state_dict(state["critic"])
        self.critic_target.load_state_dict(state["critic_target"])
        with torch.no_grad():
            self.log_alpha.copy_(state["log_alpha"])
        self.policy_optimizer.load_state_dict(state["policy_optimizer"])
        self.critic_optimizer.load_state_dict(state["critic_optimizer"])
        self.alpha_optimizer.load_state_dict(state["alpha_optimizer"])
        self.updates = int(state["updates"])

    def rng_state(self) -> dict[str, Any]:
        """Numpy and torch RNG states, JSON-serializable."""
        return {
            "numpy": self.rng.bit_generator.state,
            "torch": self.generator.get_state().tolist(),
        }

    def set_rng_state(self, state: dict[str, Any]) -> None:
        self.rng.bit_generator.state = state["numpy"]
        self.generator.set_state(torch.tensor(state["torch"], dtype=torch.uint8))
