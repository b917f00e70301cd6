"""
Event Bus Implementation.

This module provides an event bus for decoupled routing of episode
events. The placement environment publishes one event per step and one
per finished episode; recorders and loggers subscribe without the
environment knowing about them.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Callable

logger = logging.getLogger(__name__)


class EventPriority(IntEnum):
    """Priority levels for event handlers."""

    HIGH = 0  # Processed first (e.g., state bookkeeping)
    NORMAL = 50  # Default priority
    LOW = 100  # Processed last (e.g., trace files)


@dataclass(frozen=True)
class StepEvent:
    """
    Event representing one environment step.

    Attributes:
        timestamp: Monotonic timestamp when the step finished
        episode_seed: Seed of the episode the step belongs to
        step: Step counter after the step (1-based)
        q: Task state after the step
        ee: End-effector pose as (x, y, z, theta)
        action: The clamped action as (dx, dy, dz, dtheta, open_cmd)
        rewards: Reward components as (r_q1, r_q12, r_q2, r_col, total)
        contacts: Names of the contact types detected this step
    """

    timestamp: float
    episode_seed: int
    step: int
    q: int
    ee: tuple[float, float, float, float]
    action: tuple[float, float, float, float, float]
    rewards: tuple[float, float, float, float, float]
    contacts: tuple[str, ...] = ()


@dataclass(frozen=True)
class EpisodeEndEvent:
    """
    Event representing the end of an episode.

    Attributes:
        timestamp: Monotonic timestamp when the episode ended
        episode_seed: Seed of the finished episode
        placing_id: Fragment id that was being placed
        steps: Number of steps taken
        success: Whether the retract goal was reached without contact
        total_return: Sum of the total rewards of the episode
    """

    timestamp: float
    episode_seed: int
    placing_id: int
    steps: int
    success: bool
    total_return: float

Handler = Callable[[Any], None]


@dataclass(frozen=True)
class _Subscription:
    handler: Handler
    priority: EventPriority
    order: int


class EventBus:
    """
    Routes episode events to subscribed handlers.

    Handlers run in ascending priority, ties in subscription order. A
    handler subscribed with :py:meth:`subscribe_all` receives every event.
    A failing handler is logged and does not stop the others.

    Example:
        >>> bus = EventBus()
        >>> unsubscribe = bus.subscribe(StepEvent, lambda e: print(e.step, e.q))
        >>> unsubscribe()
    """

    __slots__ = ("_subscriptions", "_lock", "_counter")

    def __init__(self) -> None:
        self._lock = threading.RLock()
        # None keys the wildcard subscriptions
        self._subscriptions: dict[type | None, list[_Subscription]] = {}
        self._counter = 0

    def _add(self, key: type | None, handler: Handler, priority: EventPriority) -> Callable[[], None]:
        with self._lock:
            subscription = _Subscription(handler, priority, self._counter)
            self._counter += 1
            self._subscriptions.setdefault(key, []).append(subscription)

        def unsubscribe() -> None:
            with self._lock:
                registered = self._subscriptions.get(key, [])
                if subscription in registered:
                    registered.remove(subscription)
                if not registered:
                    self._subscriptions.pop(key, None)

        return unsubscribe

    def subscribe(
        self, event_type: type, handler: Handler, priority: EventPriority = EventPriority.NORMAL
    ) -> Callable[[], None]:
        """
        Subscribe ``handler`` to one event class.

        Returns:
            A function removing the subscription; calling it twice is harmless.
        """
        return self._add(event_type, handler, priority)

    def subscribe_all(self, handler: Handler, priority: EventPriority = EventPriority.NORMAL) -> Callable[[], None]:
        """Subscribe ``handler`` to every event class."""
        return self._add(None, handler, priority)

    def publish(self, event: Any) -> None:
        """Deliver ``event`` to its class's handlers and the wildcard handlers."""
        with self._lock:
            targets = self._subscriptions.get(type(event), []) + self._subscriptions.get(None, [])
        for subscription in sorted(targets, key=lambda s: (s.priority, s.order)):
            try:
                subscription.handler(event)
            except Exception:
                logger.exception("handler for %s failed", type(event).__name__)
