"""
Learner Configuration.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping

from compactplace.core.exceptions import ConfigError


@dataclass(frozen=True)
class TrainConfig:
    """
    Settings of the truncated-quantile learner and its training loop.

    Attributes:
        n_critics: Number of independent critics.
        n_quantiles: Quantiles per critic.
        drop_per_critic: Top atoms dropped per critic from the pooled target.
        buffer_size: Replay capacity.
        batch_size: Minibatch size per gradient update.
        learning_rate: Adam step size for actor, critics and temperature.
        gamma: Discount factor.
        exploration_sigma: Std of the Gaussian noise added to training actions.
        tau: Soft update coefficient of the target critics.
        hidden: Hidden layer sizes of every network.
        warmup_steps: Uniform random steps before the first update.
        use_entropy: Auto-tune an entropy temperature.
        use_exploration_noise: Add Gaussian exploration noise.
        initial_alpha: Starting entropy temperature.
        eval_every: Environment steps between evaluations.
        eval_episodes: Deterministic episodes per evaluation.
        total_steps: Environment steps of a training run.
        seed: Master seed.
    """

    n_critics: int = 2
    n_quantiles: int = 25
    drop_per_critic: int = 2
    buffer_size: int = 100_000
    batch_size: int = 128
    learning_rate: float = 1e-3
    gamma: float = 0.95
    exploration_sigma: float = 0.1
    tau: float = 0.05
    hidden: tuple[int, ...] = (128, 128, 128)
    warmup_steps: int = 1000
    use_entropy: bool = True
    use_exploration_noise: bool = True
    initial_alpha: float = 1.0
    eval_every: int = 5000
    eval_episodes: int = 20
    total_steps: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        for name in (
            "n_critics",
            "n_quantiles",
            "buffer_size",
            "batch_size",
            "eval_every",
            "eval_episodes",
            "total_steps",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"train.{name} must be >= 1")
        if not 0 <= self.drop_per_critic < self.n_quantiles:
            raise ConfigError("train.drop_per_critic must be in [0, n_quantiles)")
        if self.learning_rate <= 0 or self.initial_alpha <= 0:
            raise ConfigError("train.learning_rate and train.initial_alpha must be > 0")
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError("train.gamma must be in [0, 1)")
        if not 0.0 < self.tau <= 1.0:
            raise ConfigError("train.tau must be in (0, 1]")
        if self.exploration_sigma < 0:
            raise ConfigError("train.exploration_sigma must be >= 0")
        if self.warmup_steps < 0:
            raise ConfigError("train.warmup_steps must be >= 0")
        if not self.hidden or min(self.hidden) < 1:
            raise ConfigError("train.hidden must list positive layer sizes")

    @property
    def drop_total(self) -> int:
        """Atoms dropped from the pooled target."""
        return self.n_critics * self.drop_per_critic

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["hidden"] = list(self.hidden)
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"train.{key} is not a known field")
        return cls(**dict(data))
