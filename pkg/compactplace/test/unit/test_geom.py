import math
import unittest

import numpy as np
import pytest
from shapely.geometry import Point as ShapelyPoint

from compactplace.core.exceptions import GeometryError
from compactplace.dataset.generator import CutLine, cut_polygon
from compactplace.geom.adjacency import corresponding_corners, point_to_line, shared_edge_segments
from compactplace.geom.collision import EPS_TOUCH, overlap, penetration_depth
from compactplace.geom.polygon import (
    angle_difference,
    area,
    bounding_box,
    box_area,
    centroid_world,
    convex_hull,
    offset,
    polygon_centroid,
    to_shapely,
    world_coords,
)
from compactplace.models.geometry import ConvexPolygon, Point2, Pose2, ReferenceLine, wrap_angle


def random_convex(rng, radius=60.0):
    while True:
        pts = rng.uniform(-radius, radius, size=(int(rng.integers(5, 12)), 2))
        try:
            hull = convex_hull(pts)
            shape, _ = ConvexPolygon.centered(hull.coords)
            return shape
        except GeometryError:
            continue


class TestPolygonModel(unittest.TestCase):
    def test_clockwise_input_is_reoriented(self):
        poly = ConvexPolygon.from_coords([(0, 0), (0, 10), (10, 10), (10, 0)])
        self.assertGreater(area(poly), 0)
        self.assertAlmostEqual(area(poly), 100.0)

    def test_collinear_and_closing_vertices_removed(self):
        poly = ConvexPolygon.from_coords([(0, 0), (5, 0), (10, 0), (10, 10), (0, 10), (0, 0)])
        self.assertEqual(len(poly), 4)

    def test_nonconvex_rejected(self):
        with self.assertRaises(GeometryError):
            ConvexPolygon.from_coords([(0, 0), (10, 0), (5, 2), (10, 10), (0, 10)])

    def test_too_few_vertices_rejected(self):
        with self.assertRaises(GeometryError):
            ConvexPolygon.from_coords([(0, 0), (1, 0)])

    def test_nonfinite_rejected(self):
        with self.assertRaises(GeometryError):
            ConvexPolygon.from_coords([(0, 0), (1, 0), (float("nan"), 1)])
        with self.assertRaises(GeometryError):
            Point2(float("inf"), 0.0)

    def test_centered_returns_input_centroid(self):
        shape, c = ConvexPolygon.centered([(10, 20), (30, 20), (30, 40), (10, 40)])
        self.assertTrue(shape.is_centered)
        self.assertAlmostEqual(c.x, 20.0)
        self.assertAlmostEqual(c.y, 30.0)
        np.testing.assert_allclose(world_coords(shape, Pose2(c.x, c.y)).min(axis=0), [10, 20])


def test_wrap_angle_range():
    assert wrap_angle(180.0) == -180.0
    assert wrap_angle(-180.0) == -180.0
    assert wrap_angle(540.0) == -180.0
    assert wrap_angle(190.0) == pytest.approx(-170.0)
    assert Pose2(0, 0, 270).theta == -90.0


def test_angle_difference_wraps():
    assert angle_difference(10.0, 350.0) == pytest.approx(20.0)
    assert angle_difference(-170.0, 170.0) == pytest.approx(20.0)
    assert angle_difference(0.0, 180.0) == pytest.approx(180.0)


def test_pose_inverse_apply_round_trips():
    pose = Pose2(12.5, -3.0, 37.0)
    pts = np.array([[1.0, 2.0], [-4.0, 7.5]])
    np.testing.assert_allclose(pose.inverse_apply(pose.apply(pts)), pts, atol=1e-12)


def test_centroid_world_follows_pose():
    shape = ConvexPolygon.rectangle(-10, -5, 10, 5)
    c = centroid_world(shape, Pose2(100, 50, 90))
    assert c.x == pytest.approx(100.0)
    assert c.y == pytest.approx(50.0)
    local = polygon_centroid(shape)
    assert abs(local.x) < 1e-12 and abs(local.y) < 1e-12


def test_offset_square_grows_by_delta():
    sq = ConvexPolygon.rectangle(-50, -50, 50, 50)
    grown = offset(sq, 3.0)
    assert area(grown) == pytest.approx(106.0 ** 2)
    assert offset(sq, 0.0) is sq
    with pytest.raises(GeometryError):
        offset(sq, -1.0)


def test_offset_keeps_local_frame():
    tri = ConvexPolygon.from_coords([(0, 0), (30, 0), (0, 40)])
    grown = offset(tri, 2.0)
    # every original vertex ends up strictly inside the grown polygon
    inner = to_shapely(grown).buffer(-1.0)
    for x, y in tri.coords:
        assert inner.contains(ShapelyPoint(x, y))


def regular_polygon(n, radius=40.0):
    angles = 2.0 * np.pi * np.arange(n) / n
    return ConvexPolygon.from_coords(np.column_stack([radius * np.cos(angles), radius * np.sin(angles)]))


OFFSET_SHAPES = [
    ConvexPolygon.rectangle(-50, -50, 50, 50),
    regular_polygon(3),
    regular_polygon(5),
    regular_polygon(6),
    regular_polygon(8),
]


@pytest.mark.parametrize("poly", OFFSET_SHAPES)
def test_offsets_compose(poly):
    twice = offset(offset(poly, 2.5), 4.0)
    once = offset(poly, 6.5)
    assert to_shapely(twice).hausdorff_distance(to_shapely(once)) < 1e-6


@pytest.mark.parametrize("poly", OFFSET_SHAPES + [ConvexPolygon.from_coords([(0, 0), (30, 0), (0, 40)])])
def test_offset_matches_mitre_buffer(poly):
    buffered = to_shapely(poly).buffer(3.0, join_style="mitre", mitre_limit=10.0)
    assert to_shapely(offset(poly, 3.0)).hausdorff_distance(buffered) < 1e-6


def test_bounding_box_and_area():
    sq = ConvexPolygon.rectangle(-5, -5, 5, 5)
    lo, hi = bounding_box([(sq, Pose2(0, 0)), (sq, Pose2(20, 10))])
    assert (lo.x, lo.y, hi.x, hi.y) == (-5.0, -5.0, 25.0, 15.0)
    assert box_area((lo, hi)) == pytest.approx(600.0)
    with pytest.raises(GeometryError):
        bounding_box([])


def test_convex_hull_rejects_collinear_points():
    with pytest.raises(GeometryError):
        convex_hull(np.array([[0, 0], [1, 1], [2, 2]]))


class TestOverlap(unittest.TestCase):
    def setUp(self):
        self.sq = ConvexPolygon.rectangle(-50, -50, 50, 50)

    def test_touching_squares_do_not_overlap(self):
        self.assertFalse(overlap(self.sq, Pose2(0, 0), self.sq, Pose2(100, 0)))
        self.assertFalse(overlap(self.sq, Pose2(0, 0), self.sq, Pose2(99.95, 0)))

    def test_interpenetrating_squares_overlap(self):
        self.assertTrue(overlap(self.sq, Pose2(0, 0), self.sq, Pose2(99, 0)))
        self.assertAlmostEqual(penetration_depth(self.sq, Pose2(0, 0), self.sq, Pose2(99, 0)), 1.0)

    def test_overlap_is_symmetric(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            a, b = random_convex(rng), random_convex(rng)
            pa = Pose2(*rng.uniform(-40, 40, 2), rng.uniform(-180, 180))
            pb = Pose2(*rng.uniform(-40, 40, 2), rng.uniform(-180, 180))
            self.assertEqual(overlap(a, pa, b, pb), overlap(b, pb, a, pa))


def test_overlap_agrees_with_shapely_outside_touch_band():
    rng = np.random.default_rng(2024)
    disagreements = 0
    checked = 0
    for _ in range(1000):
        a, b = random_convex(rng), random_convex(rng)
        pa = Pose2(*rng.uniform(-80, 80, 2), rng.uniform(-180, 180))
        pb = Pose2(*rng.uniform(-80, 80, 2), rng.uniform(-180, 180))
        sa, sb = to_shapely(a, pa), to_shapely(b, pb)
        ours = overlap(a, pa, b, pb)
        if sa.distance(sb) > 1e-9:
            checked += 1
            disagreements += ours
        elif sa.buffer(-EPS_TOUCH).intersection(sb.buffer(-EPS_TOUCH)).area > 1e-9:
            checked += 1
            disagreements += not ours
    assert checked > 900
    assert disagreements == 0


def test_shared_edge_of_two_squares():
    sq = ConvexPolygon.rectangle(-50, -50, 50, 50)
    segments = shared_edge_segments(sq, Pose2(50, 50), sq, Pose2(150, 50))
    assert len(segments) == 1
    seg = segments[0]
    assert (seg.a.x, seg.a.y, seg.b.x, seg.b.y) == pytest.approx((100.0, 0.0, 100.0, 100.0))
    assert shared_edge_segments(sq, Pose2(0, 0), sq, Pose2(103, 0)) == []


def test_shared_edge_needs_antiparallel_edges():
    sq = ConvexPolygon.rectangle(-50, -50, 50, 50)
    # rotated 5 degrees, edges no longer antiparallel within 1 degree
    assert shared_edge_segments(sq, Pose2(0, 0), sq, Pose2(100.5, 0, 5)) == []


def test_corresponding_corners_empty_raises():
    with pytest.raises(GeometryError):
        corresponding_corners([])


def test_corresponding_corners_match_cut_chord():
    rng = np.random.default_rng(11)
    fixtures = 0
    while fixtures < 200:
        shape = random_convex(rng, radius=80.0)
        line = CutLine.through(*rng.uniform(-10, 10, 2), rng.uniform(0, math.pi))
        try:
            left, right = cut_polygon(shape, Pose2(0, 0), line)
        except GeometryError:
            continue
        if left is None or right is None:
            continue
        (sa, pa), (sb, pb) = left, right
        segments = shared_edge_segments(sa, pa, sb, pb)
        if not segments:
            continue
        fixtures += 1
        p, q = corresponding_corners(segments)
        # all-pairs oracle over the shared endpoints
        ends = [pt for s in segments for pt in (s.a, s.b)]
        best = max(u.distance_to(v) for u in ends for v in ends)
        assert p.distance_to(q) == pytest.approx(best, abs=1e-9)
        # both corners lie on the cut line
        for c in (p, q):
            rel = c.as_array() - line.point.as_array()
            d = line.direction.as_array()
            assert abs(rel[0] * d[1] - rel[1] * d[0]) < 1e-6


def test_corresponding_corners_order_independent():
    segs = [
        shared_edge_segments(
            ConvexPolygon.rectangle(-50, -50, 50, 50), Pose2(0, 0), ConvexPolygon.rectangle(-50, -50, 50, 50), Pose2(100, 0)
        )[0],
        shared_edge_segments(
            ConvexPolygon.rectangle(-50, -50, 50, 50), Pose2(0, 0), ConvexPolygon.rectangle(-50, -50, 50, 50), Pose2(0, 100)
        )[0],
    ]
    assert corresponding_corners(segs) == corresponding_corners(list(reversed(segs)))


def test_point_to_line():
    d, foot = point_to_line(Point2(30, 40), ReferenceLine.LX)
    assert d == 40.0 and foot == Point2(30.0, 0.0)
    d, foot = point_to_line(Point2(-30, 40), "y")
    assert d == 30.0 and foot == Point2(0.0, 40.0)
