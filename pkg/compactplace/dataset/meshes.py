"""
Fragment Meshes.

Extrudes fragments into closed prisms so a layout can be loaded into a
3D simulator or CAD tool.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import trimesh

from compactplace.models.layout import Fragment

logger = logging.getLogger(__name__)


def fragment_mesh(fragment: Fragment) -> trimesh.Trimesh:
    """
    Prism of the fragment outline, bottom face on z=0, in the local frame.

    A convex outline is fanned from its first vertex before extrusion.
    """
    coords = np.asarray(fragment.shape.coords, dtype=float)
    n = len(coords)
    faces = np.array([[0, k, k + 1] for k in range(1, n - 1)], dtype=np.int64)
    mesh = trimesh.creation.extrude_triangulation(coords, faces, fragment.height)
    if not mesh.is_watertight:
        logger.warning("mesh of fragment %d is not watertight", fragment.id)
    return mesh


def export_fragment_mesh(fragment: Fragment, path: str | Path) -> Path:
    """Write the fragment prism; the format follows the file suffix (.obj, .stl, ...)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fragment_mesh(fragment).export(str(path))
    return path
