import json
import unittest

import numpy as np
import pytest

from compactplace.core.exceptions import (
    ConfigError,
    LayoutFormatError,
    LayoutGenerationError,
    LayoutInvariantError,
)
from compactplace.dataset.generator import fragment_mass, generate_layout
from compactplace.dataset.graph import max_degree, unreachable_fragments
from compactplace.dataset.meshes import export_fragment_mesh, fragment_mesh
from compactplace.dataset.sequence import extract_sequence
from compactplace.dataset.storage import (
    layout_from_dict,
    layout_to_dict,
    load_layout,
    save_layout,
    validate_layout,
)
from compactplace.models.geometry import Point2
from compactplace.models.layout import MAX_NEIGHBORS, GeneratorConfig
from compactplace.test.unit.helpers import grid_squares, square_layout, two_squares


class TestGeneratedLayouts(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.cfg = GeneratorConfig()
        cls.layouts = [generate_layout(GeneratorConfig(seed=s)) for s in range(100)]

    def test_layout_invariants_hold(self):
        for layout in self.layouts:
            validate_layout(layout)

    def test_area_is_conserved(self):
        total = self.cfg.global_width * self.cfg.global_height
        for layout in self.layouts:
            self.assertLessEqual(abs(sum(f.area for f in layout.fragments) - total), 1e-6 * total)

    def test_sequence_is_a_constrained_permutation(self):
        for layout in self.layouts:
            self.assertEqual(sorted(layout.sequence), sorted(f.id for f in layout.fragments))
            self.assertEqual(unreachable_fragments(layout.sequence, layout.adjacency, layout.line_flags), [])

    def test_neighbor_limit(self):
        for layout in self.layouts:
            self.assertLessEqual(max_degree(layout.adjacency), MAX_NEIGHBORS)

    def test_fragments_are_centered_with_consistent_mass(self):
        for layout in self.layouts:
            for f in layout.fragments:
                self.assertTrue(f.shape.is_centered)
                self.assertAlmostEqual(f.mass, fragment_mass(f.area, f.height, self.cfg.density), places=12)

    def test_some_fragment_borders_each_line(self):
        for layout in self.layouts:
            flags = layout.line_flags.values()
            self.assertTrue(any(fl.borders_lx for fl in flags))
            self.assertTrue(any(fl.borders_ly for fl in flags))


def test_generation_is_deterministic():
    a = generate_layout(GeneratorConfig(seed=7))
    b = generate_layout(GeneratorConfig(seed=7))
    assert layout_to_dict(a) == layout_to_dict(b)
    assert a.layout_id == "layout-7"


def test_generation_gives_up_after_rejections():
    with pytest.raises(LayoutGenerationError):
        generate_layout(GeneratorConfig(seed=1, min_fragment_area=1e9))


def test_generator_config_validation():
    with pytest.raises(ConfigError):
        GeneratorConfig(n_cuts=0)
    with pytest.raises(ConfigError) as info:
        GeneratorConfig.from_dict({"n_cut": 3})
    assert "generator.n_cut" in str(info.value)


def test_two_squares_adjacency_and_corners():
    layout = two_squares()
    assert layout.adjacency == frozenset({(0, 1)})
    pairs = layout.corner_pairs(0, 1)
    on_0 = sorted((p.x, p.y) for p, _ in pairs)
    on_1 = sorted((q.x, q.y) for _, q in pairs)
    np.testing.assert_allclose(on_0, [(50.0, -50.0), (50.0, 50.0)], atol=1e-9)
    np.testing.assert_allclose(on_1, [(-50.0, -50.0), (-50.0, 50.0)], atol=1e-9)
    # reversed orientation swaps the members
    assert [(q, p) for p, q in layout.corner_pairs(1, 0)] == pairs


def test_two_squares_line_flags():
    flags = two_squares().line_flags
    assert flags[0].borders_lx and flags[0].borders_ly
    assert flags[1].borders_lx and not flags[1].borders_ly
    assert flags[0].anchors_lx == (Point2(-50.0, -50.0), Point2(50.0, -50.0))
    assert flags[1].anchors_ly == ()


def test_snake_sequence_on_grid():
    layout = grid_squares(2, 2)
    # ids: 0 bottom-left, 1 bottom-right, 2 top-left, 3 top-right
    assert extract_sequence(layout.fragments, 100.0, 50.0) == [0, 1, 3, 2]
    assert extract_sequence((), 100.0, 50.0) == []


def test_save_and_load_restore_layout(tmp_path):
    layout = generate_layout(GeneratorConfig(seed=3))
    path = save_layout(layout, tmp_path / "layout.json")
    loaded = load_layout(path)
    assert layout_to_dict(loaded) == layout_to_dict(layout)
    assert loaded.sequence == layout.sequence


def test_load_rejects_malformed_files(tmp_path):
    truncated = tmp_path / "truncated.json"
    truncated.write_text('{"version": 1, "fragments": [', encoding="utf-8")
    with pytest.raises(LayoutFormatError):
        load_layout(truncated)

    undecodable = tmp_path / "undecodable.json"
    undecodable.write_bytes(b"\xff\xfe{}")
    with pytest.raises(LayoutFormatError):
        load_layout(undecodable)

    data = layout_to_dict(two_squares())
    with pytest.raises(LayoutFormatError):
        layout_from_dict({**data, "version": 2})
    missing = dict(data)
    del missing["sequence"]
    with pytest.raises(LayoutFormatError):
        layout_from_dict(missing)


def test_load_rejects_invariant_violations():
    overlapping = layout_to_dict(square_layout([(50.0, 50.0), (120.0, 50.0)]))
    with pytest.raises(LayoutInvariantError):
        layout_from_dict(overlapping)

    data = layout_to_dict(two_squares())
    data["sequence"] = [0, 0]
    with pytest.raises(LayoutInvariantError):
        layout_from_dict(json.loads(json.dumps(data)))


def test_fragment_mesh_is_closed_prism(tmp_path):
    fragment = two_squares().fragment(0)
    mesh = fragment_mesh(fragment)
    assert mesh.is_watertight
    assert abs(mesh.volume) == pytest.approx(fragment.area * fragment.height)
    assert mesh.bounds[0][2] == pytest.approx(0.0)
    assert mesh.bounds[1][2] == pytest.approx(fragment.height)
    path = export_fragment_mesh(fragment, tmp_path / "meshes" / "f0.stl")
    assert path.exists() and path.stat().st_size > 0
