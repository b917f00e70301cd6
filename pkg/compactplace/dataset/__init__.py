"""
Layout Dataset.

This module provides the crossing-cuts layout generator, the layout graph
(adjacency, corresponding corners, reference-line flags), the snake
assembly sequence, JSON persistence and mesh export.
"""

from compactplace.dataset.generator import (
    MAX_ATTEMPTS,
    CutLine,
    cut_polygon,
    derive_seed,
    fragment_mass,
    generate_layout,
)
from compactplace.dataset.graph import (
    compute_adjacency,
    compute_line_flags,
    max_degree,
    unreachable_fragments,
)
from compactplace.dataset.sequence import extract_sequence
from compactplace.dataset.storage import (
    LAYOUT_VERSION,
    layout_from_dict,
    layout_to_dict,
    load_layout,
    save_layout,
    validate_layout,
)
from compactplace.dataset.meshes import export_fragment_mesh, fragment_mesh

__all__ = [
    "MAX_ATTEMPTS",
    "CutLine",
    "cut_polygon",
    "derive_seed",
    "fragment_mass",
    "generate_layout",
    "compute_adjacency",
    "compute_line_flags",
    "max_degree",
    "unreachable_fragments",
    "extract_sequence",
    "LAYOUT_VERSION",
    "layout_to_dict",
    "layout_from_dict",
    "save_layout",
    "load_layout",
    "validate_layout",
    "export_fragment_mesh",
    "fragment_mesh",
]
