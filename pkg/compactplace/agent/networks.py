"""
Policy and Critic Networks.

The policy is a squashed Gaussian over the five action components; each
critic maps an observation-action pair to a set of quantile values.
"""

from __future__ import annotations

import math
from typing import Sequence

import torch
import torch.nn as nn
import torch.nn.functional as F

LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0
_ATANH_CLIP = 1.0 - 1e-6


def mlp(in_dim: int, hidden: Sequence[int], out_dim: int) -> nn.Sequential:
    """Fully connected ReLU network."""
    layers: list[nn.Module] = []
    last = in_dim
    for width in hidden:
        layers += [nn.Linear(last, width), nn.ReLU()]
        last = width
    layers.append(nn.Linear(last, out_dim))
    return nn.Sequential(*layers)


def squash_correction(u: torch.Tensor) -> torch.Tensor:
    """
    log(1 - tanh(u)^2) summed over the last dimension.

    Written as 2 (log 2 - u - softplus(-2u)) so it stays finite for large |u|.
    """
    return (2.0 * (math.log(2.0) - u - F.softplus(-2.0 * u))).sum(dim=-1)


class PolicyNet(nn.Module):
    """
    Tanh-squashed Gaussian policy.

    Args:
        obs_dim: Observation size.
        action_dim: Action size.
        hidden: Hidden layer sizes.
    """

    def __init__(self, obs_dim: int, action_dim: int, hidden: Sequence[int]) -> None:
        super().__init__()
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.net = mlp(obs_dim, hidden, 2 * action_dim)

    def forward(self, obs: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """Mean and clamped log-std of the pre-squash Gaussian."""
        out = self.net(obs)
        mean, log_std = out.split(self.action_dim, dim=-1)
        return mean, log_std.clamp(LOG_STD_MIN, LOG_STD_MAX)

    def sample(
        self,
        obs: torch.Tensor,
        deterministic: bool = False,
        noise: torch.Tensor | None = None,
    ) -> tuple[torch.Tensor, torch.Tensor]:
        """
        Squashed action and its log-probability.

        Args:
            obs: Observation batch.
            deterministic: Return the squashed mean.
            noise: Standard normal draws to use instead of sampling.
        """
        mean, log_std = self(obs)
        std = log_std.exp()
        if deterministic:
            u = mean
        else:
            eps = noise if noise is not None else torch.randn_like(mean)
            u = mean + std * eps
        log_prob = (
            (-0.5 * ((u - mean) / std) ** 2 - log_std - 0.5 * math.log(2.0 * math.pi)).sum(dim=-1)
            - squash_correction(u)
        )
        return torch.tanh(u), log_prob

    def log_prob(self, obs: torch.Tensor, action: torch.Tensor) -> torch.Tensor:
        """Log-density of a squashed action."""
        mean, log_std = self(obs)
        u = torch.atanh(action.clamp(-_ATANH_CLIP, _ATANH_CLIP))
        std = log_std.exp()
        gauss = (-0.5 * ((u - mean) / std) ** 2 - log_std - 0.5 * math.log(2.0 * math.pi)).sum(dim=-1)
        return gauss - squash_correction(u)


class CriticNet(nn.Module):
    """
    Ensemble of quantile critics.

    Args:
        obs_dim: Observation size.
        action_dim: Action size.
        hidden: Hidden layer sizes.
        n_critics: Number of critics.
        n_quantiles: Quantiles per critic.
    """

    def __init__(
        self,
        obs_dim: int,
        action_dim: int,
        hidden: Sequence[int],
        n_critics: int,
        n_quantiles: int,
    ) -> None:
        super().__init__()
        self.n_critics = n_critics
        self.n_quantiles = n_quantiles
        self.critics = nn.ModuleList(
            mlp(obs_dim + action_dim, hidden, n_quantiles) for _ in range(n_critics)
        )

    def forward(self, obs: torch.Tensor, action: torch.Tensor) -> torch.Tensor:
        """Quantiles of every critic, shape (batch, n_critics, n_quantiles)."""
        x = torch.cat([obs, action], dim=-1)
        return torch.stack([critic(x) for critic in self.critics], dim=1)
