"""
Replay Buffer.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from compactplace.core.exceptions import TrainingError


@dataclass(frozen=True)
class Batch:
    """A sampled minibatch; rows align across fields."""

    obs: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_obs: np.ndarray
    dones: np.ndarray
    indices: np.ndarray

    def __len__(self) -> int:
        return len(self.rewards)


class ReplayBuffer:
    """
    Fixed-capacity ring buffer of transitions.

    Writes go through a lock so rollouts from several environments can
    feed one buffer.

    Args:
        capacity: Maximum number of transitions kept.
        obs_dim: Observation size.
        action_dim: Action size.
    """

    __slots__ = ("_capacity", "_obs", "_actions", "_rewards", "_next_obs", "_dones", "_pos", "_size", "_lock")

    def __init__(self, capacity: int, obs_dim: int, action_dim: int) -> None:
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self._capacity = capacity
        self._obs = np.zeros((capacity, obs_dim), dtype=np.float32)
        self._actions = np.zeros((capacity, action_dim), dtype=np.float32)
        self._rewards = np.zeros(capacity, dtype=np.float32)
        self._next_obs = np.zeros((capacity, obs_dim), dtype=np.float32)
        self._dones = np.zeros(capacity, dtype=np.float32)
        self._pos = 0
        self._size = 0
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return self._size

    @property
    def capacity(self) -> int:
        return self._capacity

    def add(
        self,
        obs: np.ndarray,
        action: np.ndarray,
        reward: float,
        next_obs: np.ndarray,
        done: bool,
    ) -> None:
        """Store one transition, overwriting the oldest when full."""
        with self._lock:
            i = self._pos
            self._obs[i] = obs
            self._actions[i] = action
            self._rewards[i] = reward
            self._next_obs[i] = next_obs
            self._dones[i] = float(done)
            self._pos = (i + 1) % self._capacity
            self._size = min(self._size + 1, self._capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        """
        Uniform minibatch without replacement.

        Raises:
            TrainingError: If the buffer holds fewer than ``batch_size``
                transitions.
        """
        with self._lock:
            if batch_size > self._size:
                raise TrainingError(
                    f"buffer holds {self._size} transitions, batch needs {batch_size}"
                )
            idx = rng.choice(self._size, size=batch_size, replace=False)
            return Batch(
                obs=self._obs[idx].copy(),
                actions=self._actions[idx].copy(),
                rewards=self._rewards[idx].copy(),
                next_obs=self._next_obs[idx].copy(),
                dones=self._dones[idx].copy(),
                indices=idx,
            )

