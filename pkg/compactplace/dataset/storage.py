"""
Layout Persistence.

Layouts are stored as versioned JSON. Floats are written with their
shortest round-trip representation, so loading restores them exactly.
Every loaded layout is checked against the layout invariants.
"""

from __future__ import annotations

import json
import logging
from itertools import combinations
from pathlib import Path
from typing import Any, Mapping

from compactplace.core.exceptions import (
    ConfigError,
    GeometryError,
    LayoutFormatError,
    LayoutInvariantError,
)
from compactplace.dataset.generator import fragment_mass
from compactplace.geom.collision import EPS_TOUCH, coords_overlap
from compactplace.geom.polygon import world_coords
from compactplace.models.geometry import ConvexPolygon, Point2, Pose2
from compactplace.models.layout import (
    MAX_NEIGHBORS,
    CornerPair,
    Fragment,
    GeneratorConfig,
    Layout,
    LineFlags,
)

logger = logging.getLogger(__name__)

LAYOUT_VERSION = 1


def _points(points) -> list[list[float]]:
    return [[p.x, p.y] for p in points]


def layout_to_dict(layout: Layout) -> dict[str, Any]:
    """JSON-ready mapping of a layout."""
    return {
        "version": LAYOUT_VERSION,
        "id": layout.layout_id,
        "config": layout.config.to_dict() if layout.config else None,
        "fragments": [
            {
                "id": f.id,
                "vertices": _points(f.shape.vertices),
                "pose": {"x": f.layout_pose.x, "y": f.layout_pose.y, "theta": f.layout_pose.theta},
                "mass": f.mass,
                "height": f.height,
            }
            for f in layout.fragments
        ],
        "adjacency": [[i, j] for i, j in sorted(layout.adjacency)],
        "corners": {
            f"{i}-{j}": [[[p.on_a.x, p.on_a.y], [p.on_b.x, p.on_b.y]] for p in pairs]
            for (i, j), pairs in sorted(layout.corners.items())
        },
        "line_flags": {
            str(fid): {
                "lx": flags.borders_lx,
                "ly": flags.borders_ly,
                "anchors": {"lx": _points(flags.anchors_lx), "ly": _points(flags.anchors_ly)},
            }
            for fid, flags in sorted(layout.line_flags.items())
        },
        "sequence": list(layout.sequence),
    }


def layout_from_dict(data: Mapping[str, Any]) -> Layout:
    """
    Rebuild and validate a layout from its JSON mapping.

    Raises:
        LayoutFormatError: On missing keys, wrong types or version mismatch.
        LayoutInvariantError: If the layout violates an invariant.
    """
    if not isinstance(data, Mapping):
        raise LayoutFormatError("layout file must contain a JSON object")
    version = data.get("version")
    if version != LAYOUT_VERSION:
        raise LayoutFormatError(f"unsupported layout version {version!r}")
    try:
        config = GeneratorConfig.from_dict(data["config"]) if data.get("config") else None
        fragments = tuple(
            Fragment(
                id=int(f["id"]),
                shape=ConvexPolygon(tuple(Point2(float(x), float(y)) for x, y in f["vertices"])),
                layout_pose=Pose2(
                    float(f["pose"]["x"]), float(f["pose"]["y"]), float(f["pose"]["theta"])
                ),
                mass=float(f["mass"]),
                height=float(f["height"]),
            )
            for f in data["fragments"]
        )
        adjacency = frozenset((int(i), int(j)) for i, j in data["adjacency"])
        corners = {}
        for key, pairs in data["corners"].items():
            i, j = (int(v) for v in key.split("-"))
            corners[(i, j)] = tuple(
                CornerPair(Point2(float(a[0]), float(a[1])), Point2(float(b[0]), float(b[1])))
                for a, b in pairs
            )
        line_flags = {
            int(fid): LineFlags(
                borders_lx=bool(v["lx"]),
                borders_ly=bool(v["ly"]),
                anchors_lx=tuple(Point2(float(x), float(y)) for x, y in v["anchors"]["lx"]),
                anchors_ly=tuple(Point2(float(x), float(y)) for x, y in v["anchors"]["ly"]),
            )
            for fid, v in data["line_flags"].items()
        }
        sequence = tuple(int(i) for i in data["sequence"])
        layout = Layout(
            fragments=fragments,
            adjacency=adjacency,
            corners=corners,
            line_flags=line_flags,
            sequence=sequence,
            config=config,
            layout_id=str(data.get("id", "")),
        )
    except (KeyError, TypeError, ValueError, AttributeError, ConfigError) as exc:
        raise LayoutFormatError(f"malformed layout: {exc!r}") from exc
    except GeometryError as exc:
        raise LayoutInvariantError(str(exc)) from exc
    validate_layout(layout)
    return layout


def validate_layout(layout: Layout, eps_touch: float = EPS_TOUCH) -> None:
    """
    Check every layout invariant.

    Raises:
        LayoutInvariantError: Naming the first offending id or pair.
    """
    ids = sorted(f.id for f in layout.fragments)
    if sorted(layout.sequence) != ids:
        raise LayoutInvariantError("sequence is not a permutation of the fragment ids")

    degree = {fid: 0 for fid in ids}
    for i, j in sorted(layout.adjacency):
        if i >= j or i not in degree or j not in degree:
            raise LayoutInvariantError(f"adjacency pair ({i}, {j}) is invalid")
        pairs = layout.corners.get((i, j))
        if pairs is None or len(pairs) != 2:
            raise LayoutInvariantError(f"adjacency pair ({i}, {j}) needs exactly 2 corner pairs")
        degree[i] += 1
        degree[j] += 1
    for key in layout.corners:
        if key not in layout.adjacency:
            raise LayoutInvariantError(f"corner entry {key} has no adjacency pair")
    for fid, d in degree.items():
        if d > MAX_NEIGHBORS:
            raise LayoutInvariantError(f"fragment {fid} has {d} neighbors (max {MAX_NEIGHBORS})")
    for fid in ids:
        if fid not in layout.line_flags:
            raise LayoutInvariantError(f"fragment {fid} has no line flags")

    cfg = layout.config
    if cfg is not None:
        for f in layout.fragments:
            if f.area < cfg.min_fragment_area:
                raise LayoutInvariantError(f"fragment {f.id} is below the minimum area")
            expected = fragment_mass(f.area, f.height, cfg.density)
            if abs(f.mass - expected) > 1e-9 * expected:
                raise LayoutInvariantError(f"fragment {f.id} mass does not match its volume")

    placed = [(f.id, world_coords(f.shape, f.layout_pose)) for f in layout.fragments]
    for (ia, ca), (ib, cb) in combinations(placed, 2):
        if coords_overlap(ca, cb, eps_touch):
            raise LayoutInvariantError(f"fragments {ia} and {ib} overlap")


def save_layout(layout: Layout, path: str | Path) -> Path:
    """Write a layout as JSON and return the path."""
    path = Path(path)
    path.write_text(json.dumps(layout_to_dict(layout), indent=2) + "\n", encoding="utf-8")
    logger.debug("wrote layout %s to %s", layout.layout_id, path)
    return path


def load_layout(path: str | Path) -> Layout:
    """
    Read and validate a layout JSON file.

    Raises:
        LayoutFormatError: If the file is not valid layout JSON.
        LayoutInvariantError: If the layout violates an invariant.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise LayoutFormatError(f"{path}: {exc}") from exc
    return layout_from_dict(data)
