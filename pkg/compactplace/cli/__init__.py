"""
Command Line.

This module provides the ``compactplace`` command, its configuration
resolution and the SVG renderer.
"""

from compactplace.cli.config import (
    EFFECTIVE_CONFIG,
    EffectiveConfig,
    load_config_file,
    resolve_config,
)
from compactplace.cli.main import build_parser, load_layouts, main
from compactplace.cli.render import render_svg, scene_poses, write_svg

__all__ = [
    # Configuration
    "EFFECTIVE_CONFIG",
    "EffectiveConfig",
    "load_config_file",
    "resolve_config",
    # Commands
    "build_parser",
    "load_layouts",
    "main",
    # Rendering
    "render_svg",
    "scene_poses",
    "write_svg",
]
