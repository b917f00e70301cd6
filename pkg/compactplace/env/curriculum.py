"""
Start-Height Curriculum.

Level 0 starts the EE just above the place position of the placing
object; the last level starts it above the assembly center at a quarter
of the arm's reach. Intermediate levels interpolate linearly, as does the
retract height. A level is passed when the evaluation success rate
exceeds the promotion threshold.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from compactplace.core.exceptions import ConfigError
from compactplace.env.config import CurriculumConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurriculumState:
    """
    One curriculum level with its interpolated heights.

    Attributes:
        level: Level index, 0 to max_level.
        ee_start_height: Height of the object's bottom face above the table
            at episode start, in mm.
        retract_height: Height the EE rises above the drop point, in mm.
        promotion_threshold: Success rate to exceed for promotion.
        max_level: Highest level.
    """

    level: int
    ee_start_height: float
    retract_height: float
    promotion_threshold: float = 0.8
    max_level: int = 21

    def __str__(self) -> str:
        return (
            f"{self.__class__.__name__}:level={self.level},"
            f"start={self.ee_start_height:.1f},retract={self.retract_height:.1f}"
        )

    @property
    def fraction(self) -> float:
        """Progress from the first (0) to the last (1) level."""
        return self.level / self.max_level

    @classmethod
    def at_level(cls, level: int, cfg: CurriculumConfig | None = None) -> "CurriculumState":
        """
        Interpolated state of a level.

        Raises:
            ConfigError: If the level is outside 0..max_level.
        """
        cfg = cfg or CurriculumConfig()
        if not 0 <= level <= cfg.max_level:
            raise ConfigError(f"curriculum level must be in 0..{cfg.max_level}, got {level}")
        t = level / cfg.max_level
        top = cfg.reach / 4.0
        return cls(
            level=level,
            ee_start_height=(1.0 - t) * cfg.start_height + t * top,
            retract_height=(1.0 - t) * cfg.retract_start + t * cfg.retract_end,
            promotion_threshold=cfg.promotion_threshold,
            max_level=cfg.max_level,
        )


def curriculum_update(
    state: CurriculumState, success_rate: float, cfg: CurriculumConfig | None = None
) -> CurriculumState:
    """
    Promote one level when the success rate exceeds the threshold.

    Example:
        >>> s = CurriculumState.at_level(0)
        >>> curriculum_update(s, 0.85).level
        1
        >>> curriculum_update(s, 0.80).level
        0
    """
    if not 0.0 <= success_rate <= 1.0:
        raise ConfigError(f"success rate must be in [0, 1], got {success_rate}")
    if success_rate > state.promotion_threshold and state.level < state.max_level:
        promoted = CurriculumState.at_level(state.level + 1, cfg)
        logger.info("curriculum promoted to level %d (success %.2f)", promoted.level, success_rate)
        return promoted
    return state
