"""
Episode Trace Export.

EpisodeTraceRecorder listens to an environment's event bus and writes
one CSV row per step.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import IO, Callable

from compactplace.core.events import EventBus, EventPriority, StepEvent

logger = logging.getLogger(__name__)

TRACE_COLUMNS = (
    "episode_seed",
    "step",
    "q",
    "ee_x",
    "ee_y",
    "ee_z",
    "ee_theta",
    "dx",
    "dy",
    "dz",
    "dtheta",
    "open_cmd",
    "r_q1",
    "r_q12",
    "r_q2",
    "r_col",
    "total",
    "contacts",
)


class EpisodeTraceRecorder:
    """
    Writes step events to a CSV trace.

    Contacts are joined with ``;``.

    Example:
        >>> with EpisodeTraceRecorder(env.events, "trace.csv"):
        ...     run_episode(env)
    """

    __slots__ = ("_path", "_file", "_writer", "_unsubscribe", "_rows")

    def __init__(self, event_bus: EventBus, path: str | Path) -> None:
        self._path = Path(path)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._file: IO[str] | None = self._path.open("w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file)
        self._writer.writerow(TRACE_COLUMNS)
        self._rows = 0
        self._unsubscribe: Callable[[], None] | None = event_bus.subscribe(
            StepEvent, self._on_step, EventPriority.LOW
        )

    @property
    def rows(self) -> int:
        """Step rows written so far."""
        return self._rows

    def _on_step(self, event: StepEvent) -> None:
        if self._file is None:
            return
        self._writer.writerow(
            [event.episode_seed, event.step, event.q]
            + [f"{v:.6f}" for v in event.ee]
            + [f"{v:.6f}" for v in event.action]
            + [f"{v:.6f}" for v in event.rewards]
            + [";".join(event.contacts)]
        )
        self._rows += 1

    def close(self) -> None:
        """Stop listening and close the file."""
        if self._unsubscribe is not None:
            self._unsubscribe()
            self._unsubscribe = None
        if self._file is not None:
            self._file.close()
            self._file = None
            logger.info("wrote %d trace rows to %s", self._rows, self._path)

    def __enter__(self) -> "EpisodeTraceRecorder":
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()
