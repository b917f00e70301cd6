"""
Command-Line Configuration.

This module resolves the effective configuration of a command from three
layers: command-line flags override the JSON config file, which overrides
the built-in defaults. The effective configuration is written next to
every command's outputs.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

from compactplace.agent.config import TrainConfig
from compactplace.core.exceptions import ConfigError
from compactplace.env.config import EnvConfig
from compactplace.models.layout import GeneratorConfig

logger = logging.getLogger(__name__)

SECTIONS = ("generator", "env", "train")
EFFECTIVE_CONFIG = "effective_config.json"


def load_config_file(path: str | Path | None) -> dict[str, Any]:
    """
    Read a config file; an omitted path yields an empty mapping.

    Raises:
        ConfigError: If the file is unreadable, not a JSON object or has
            unknown sections.
    """
    if path is None:
        return {}
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    for key in raw:
        if key not in SECTIONS:
            raise ConfigError(f"{key} is not a known config section")
    return raw


@dataclass(frozen=True)
class EffectiveConfig:
    """
    Configuration a command runs with.

    Attributes:
        generator: Layout generator settings.
        env: Environment settings.
        train: Learner settings.
        seed: Master seed of the command.
    """

    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    env: EnvConfig = field(default_factory=EnvConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    seed: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "generator": self.generator.to_dict(),
            "env": self.env.to_dict(),
            "train": self.train.to_dict(),
        }

    def write(self, out_dir: str | Path) -> Path:
        """Echo the configuration into ``out_dir``."""
        path = Path(out_dir) / EFFECTIVE_CONFIG
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.debug("wrote %s", path)
        return path


def _section(raw: Mapping[str, Any], name: str) -> Mapping[str, Any]:
    value = raw.get(name, {})
    if not isinstance(value, Mapping):
        raise ConfigError(f"{name} section must be a JSON object")
    return value


def resolve_config(
    config_path: str | Path | None = None,
    seed: int | None = None,
    steps: int | None = None,
    no_reference_lines: bool = False,
) -> EffectiveConfig:
    """
    Merge flags, file and defaults.

    Args:
        config_path: JSON config file.
        seed: Overrides ``generator.seed`` and ``train.seed``.
        steps: Overrides ``train.total_steps``.
        no_reference_lines: Selects the NO-L reward.

    Raises:
        ConfigError: Naming the first invalid field.
    """
    raw = load_config_file(config_path)
    try:
        generator = GeneratorConfig.from_dict(_section(raw, "generator"))
        env = EnvConfig.from_dict(_section(raw, "env"))
        train = TrainConfig.from_dict(_section(raw, "train"))
    except TypeError as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc

    if seed is not None:
        generator = replace(generator, seed=seed)
        train = replace(train, seed=seed)
    if steps is not None:
        train = replace(train, total_steps=steps)
    if no_reference_lines:
        env = replace(env, reward=replace(env.reward, use_reference_lines=False))
    return EffectiveConfig(generator=generator, env=env, train=train, seed=train.seed)
