import csv
import json
import math
import os
import unittest

import mock
import numpy as np
import pytest

from compactplace.baselines.bl1 import bl1_plan
from compactplace.core.exceptions import ConfigError, LayoutInvariantError
from compactplace.dataset.generator import generate_layout
from compactplace.env.config import EnvConfig, RewardConfig
from compactplace.env.observation import EE_POSE, TASK_STATE
from compactplace.evaluation.metrics import (
    BoundingBoxReading,
    DistanceReading,
    collision_rate,
    metric_angle_diff,
    metric_bb_increase,
    metric_collision_rate,
    metric_mean_object_distance,
    registered_poses,
)
from compactplace.evaluation.reference import format_reference_comparison
from compactplace.evaluation.sources import OracleSource, PlanSource, PolicySource, episode_seed
from compactplace.evaluation.suite import (
    SCORE_COLUMNS,
    THREADS_ENV,
    LayoutScore,
    aggregate,
    evaluate_suite,
    score_assembly,
    worker_count,
)
from compactplace.geom.polygon import world_coords
from compactplace.models.assembly import AgentTag, AssemblyResult, MetricReport, MetricSummary
from compactplace.models.episode import ContactType
from compactplace.models.geometry import Pose2
from compactplace.models.layout import GeneratorConfig
from compactplace.test.unit.helpers import square_layout, two_squares


def result_with(layout, poses, collided=(), agent=AgentTag.OUR):
    return AssemblyResult(
        layout_id=layout.layout_id,
        agent=agent,
        placed_poses=dict(poses),
        collision_events=[(fid, ContactType.OBJECT_TABLE_OBJECT) for fid in collided],
        success={fid: fid not in collided for fid in layout.sequence},
        placement_order=list(layout.sequence),
    )


class DescendAndRelease:
    """Drops the held fragment straight down, then rises."""

    REST_Z = 42.0 / 300.0

    def act(self, obs, deterministic=True):
        if obs[TASK_STATE] < 0.5:
            if obs[EE_POSE.start + 2] > self.REST_Z + 1e-6:
                return np.array([0.0, 0.0, -1.0, 0.0, -1.0])
            return np.array([0.0, 0.0, 0.0, 0.0, 1.0])
        return np.array([0.0, 0.0, 1.0, 0.0, -1.0])


class TestMetrics(unittest.TestCase):
    def setUp(self):
        self.layout = two_squares()

    def test_perfect_assembly_scores_zero(self):
        result = result_with(self.layout, self.layout.layout_poses())
        self.assertEqual(metric_bb_increase(result, self.layout), 0.0)
        self.assertEqual(metric_angle_diff(result, self.layout), 0.0)
        self.assertEqual(metric_mean_object_distance(result, self.layout), 0.0)
        self.assertEqual(collision_rate(result), 0.0)

    def test_translation_is_registered_away(self):
        shifted = {fid: p.translated(500.0, -30.0) for fid, p in self.layout.layout_poses().items()}
        result = result_with(self.layout, shifted)
        self.assertEqual(registered_poses(result, self.layout), self.layout.layout_poses())
        self.assertAlmostEqual(metric_bb_increase(result, self.layout), 0.0, places=9)

    def test_registration_uses_first_placed_fragment(self):
        poses = {0: Pose2(50.0, 50.0), 1: Pose2(170.0, 50.0)}
        result = result_with(self.layout, poses)
        registered = registered_poses(result, self.layout)
        self.assertEqual(registered[0], Pose2(50.0, 50.0))
        # 20 mm gap: 220 x 100 against 200 x 100
        self.assertAlmostEqual(metric_bb_increase(result, self.layout), 10.0)
        self.assertAlmostEqual(metric_mean_object_distance(result, self.layout), 20.0)
        self.assertAlmostEqual(
            metric_mean_object_distance(result, self.layout, DistanceReading.RAW), 120.0
        )

    def test_per_fragment_sum_reading(self):
        result = result_with(self.layout, self.layout.layout_poses())
        self.assertEqual(metric_bb_increase(result, self.layout, BoundingBoxReading.PER_FRAGMENT_SUM), 0.0)
        rotated = {0: Pose2(50.0, 50.0, 45.0), 1: Pose2(150.0, 50.0)}
        value = metric_bb_increase(result_with(self.layout, rotated), self.layout, BoundingBoxReading.PER_FRAGMENT_SUM)
        # the rotated square's box is 100 * sqrt(2) on a side
        self.assertAlmostEqual(value, 50.0, places=6)

    def test_angle_difference_wraps(self):
        poses = {0: Pose2(50.0, 50.0, 10.0), 1: Pose2(150.0, 50.0, 340.0)}
        self.assertAlmostEqual(metric_angle_diff(result_with(self.layout, poses), self.layout), 15.0)

    def test_collided_fragment_is_excluded(self):
        result = result_with(self.layout, {0: Pose2(50.0, 50.0)}, collided=[1])
        self.assertAlmostEqual(metric_bb_increase(result, self.layout), -50.0)
        self.assertEqual(collision_rate(result), 50.0)
        score = score_assembly(result, self.layout)
        self.assertTrue(math.isnan(score.mean_dist_mm))
        self.assertEqual(score.angle_diff_deg, 0.0)
        self.assertEqual((score.episodes, score.collisions), (2, 1))

    def test_suite_collision_rate_pools_episodes(self):
        hit = result_with(self.layout, {0: Pose2(50.0, 50.0)}, collided=[1])
        clean = result_with(self.layout, self.layout.layout_poses())
        self.assertEqual(metric_collision_rate([hit, clean]), 25.0)
        self.assertEqual(metric_collision_rate([]), 0.0)


class TestSources(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.layouts = [generate_layout(GeneratorConfig(seed=s)) for s in range(10)]

    def test_oracle_scores_zero_everywhere(self):
        report, results = evaluate_suite(OracleSource(), self.layouts, threads=2)
        for summary in (
            report.bb_increase_pct,
            report.angle_diff_deg,
            report.mean_dist_mm,
            report.collision_rate_pct,
        ):
            self.assertEqual(summary.mean, 0.0)
            self.assertEqual(summary.n, 10)
        self.assertEqual([r.layout_id for r in results], [l.layout_id for l in self.layouts])
        self.assertEqual(report.agent, AgentTag.ORACLE)

    def test_bl1_scaling_laws(self):
        for layout in self.layouts[:5]:
            result = PlanSource(bl1_plan, AgentTag.BL1).assemble(layout)
            scale = result.metadata["scale"]
            oracle = OracleSource().assemble(layout)
            nearest = metric_mean_object_distance(oracle, layout, DistanceReading.RAW)
            self.assertAlmostEqual(metric_mean_object_distance(result, layout), (scale - 1.0) * nearest, places=6)
            self.assertAlmostEqual(metric_angle_diff(result, layout), 0.0, places=9)

            # vertex scan over the placed fragments
            placed = np.vstack(
                [world_coords(layout.fragment(fid).shape, p) for fid, p in result.placed_poses.items()]
            )
            ref = np.vstack([world_coords(f.shape, f.layout_pose) for f in layout.fragments])
            a_placed = np.prod(placed.max(axis=0) - placed.min(axis=0))
            a_layout = np.prod(ref.max(axis=0) - ref.min(axis=0))
            expected = 100.0 * (a_placed - a_layout) / a_layout
            self.assertAlmostEqual(metric_bb_increase(result, layout), expected, places=6)
            self.assertEqual(score_assembly(result, layout).plan_info, f"k={result.metadata['k']}")

    def test_policy_source_places_in_sequence(self):
        layout = square_layout([(50.0, 50.0), (50.0, 150.0)], layout_id="stacked")
        source = PolicySource(DescendAndRelease(), EnvConfig(yaw_range=0.0), curriculum_level=0)
        self.assertEqual(source.tag, AgentTag.OUR)
        result = source.assemble(layout)
        self.assertEqual(result.collision_events, [])
        self.assertEqual(result.placement_order, [0, 1])
        self.assertTrue(all(result.success.values()))
        self.assertEqual(result.placed_poses, layout.layout_poses())
        self.assertEqual(result.metadata, {"curriculum_level": 0})

    def test_policy_source_keeps_released_fragment_after_contact(self):
        class ReleaseThenDescend(DescendAndRelease):
            def act(self, obs, deterministic=True):
                action = super().act(obs, deterministic)
                if obs[TASK_STATE] >= 0.5:
                    action[2] = -1.0
                return action

        layout = square_layout([(50.0, 50.0), (50.0, 150.0)], layout_id="stacked")
        source = PolicySource(ReleaseThenDescend(), EnvConfig(yaw_range=0.0), curriculum_level=0)
        result = source.assemble(layout)
        self.assertEqual(result.collision_events, [(0, ContactType.ROBOT_TABLE), (1, ContactType.ROBOT_TABLE)])
        self.assertEqual(result.placed_poses, layout.layout_poses())
        self.assertFalse(any(result.success.values()))

    def test_policy_source_tags_no_lines(self):
        cfg = EnvConfig(reward=RewardConfig(use_reference_lines=False))
        self.assertEqual(PolicySource(DescendAndRelease(), cfg).tag, AgentTag.NO_L)

    def test_episode_seeds(self):
        self.assertEqual(episode_seed(1, "layout-3", 2), episode_seed(1, "layout-3", 2))
        self.assertNotEqual(episode_seed(1, "layout-3", 2), episode_seed(1, "layout-3", 3))
        self.assertNotEqual(episode_seed(1, "layout-3", 2), episode_seed(1, "layout-4", 2))


class TestSuite(unittest.TestCase):
    def test_worker_count_from_environment(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: "3"}):
            self.assertEqual(worker_count(), 3)
        with mock.patch.dict(os.environ, {THREADS_ENV: "0"}):
            with self.assertRaises(ConfigError):
                worker_count()
        with mock.patch.dict(os.environ, {THREADS_ENV: "many"}):
            with self.assertRaises(ConfigError):
                worker_count()
        with mock.patch.dict(os.environ, {}):
            os.environ.pop(THREADS_ENV, None)
            self.assertEqual(worker_count(5), 5)
            self.assertGreaterEqual(worker_count(), 1)

    def test_empty_suite(self):
        with self.assertRaises(ConfigError):
            evaluate_suite(OracleSource(), [])

    def test_incomplete_result_is_rejected(self):
        layout = two_squares()
        source = mock.Mock(tag=AgentTag.OUR)
        source.assemble.return_value = result_with(layout, {0: Pose2(50.0, 50.0)})
        with self.assertRaises(LayoutInvariantError):
            evaluate_suite(source, [layout], threads=1)

    def test_aggregate_skips_undefined_metrics(self):
        scores = [
            LayoutScore("a", 10.0, 1.0, float("nan"), 0.0, 2, 0),
            LayoutScore("b", 20.0, 3.0, 4.0, 50.0, 2, 1),
        ]
        report = aggregate(AgentTag.OUR, scores)
        self.assertEqual(report.mean_dist_mm.n, 1)
        self.assertEqual(report.mean_dist_mm.mean, 4.0)
        self.assertEqual(report.bb_increase_pct.mean, 15.0)
        self.assertAlmostEqual(report.bb_increase_pct.std, math.sqrt(50.0))

    def test_metric_summary(self):
        s = MetricSummary.of([1.0, 2.0, 3.0])
        self.assertEqual((s.mean, s.std, s.n), (2.0, 1.0, 3))
        self.assertEqual(MetricSummary.of([4.0]).std, 0.0)
        self.assertTrue(math.isnan(MetricSummary.of([]).mean))
        with self.assertRaises(LayoutInvariantError):
            MetricReport(AgentTag.OUR, s, s, s, MetricSummary.of([120.0]))


def test_evaluate_suite_writes_reports(tmp_path):
    layouts = [two_squares(), square_layout([(50.0, 50.0), (50.0, 150.0)], layout_id="stacked")]
    report, results = evaluate_suite(OracleSource(), layouts, out_dir=tmp_path, threads=2)

    with (tmp_path / "oracle_layouts.csv").open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert tuple(rows[0]) == SCORE_COLUMNS
    assert [r[0] for r in rows[1:]] == ["two-squares", "stacked"]

    summary = json.loads((tmp_path / "oracle_summary.json").read_text())
    assert summary["agent"] == "ORACLE"
    assert summary["collision_rate_pct"] == {"mean": 0.0, "std": 0.0, "n": 2}

    stored = json.loads((tmp_path / "results" / "oracle" / "stacked.json").read_text())
    assert AssemblyResult.from_dict(stored).placed_poses == results[1].placed_poses


def test_report_matches_layout_rows(tmp_path):
    layouts = [generate_layout(GeneratorConfig(seed=s)) for s in range(6)]
    report, _ = evaluate_suite(PlanSource(bl1_plan, AgentTag.BL1), layouts, out_dir=tmp_path, threads=2)
    with (tmp_path / "bl1_layouts.csv").open(newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 6
    for name in ("bb_increase_pct", "angle_diff_deg", "mean_dist_mm", "collision_rate_pct"):
        values = [float(r[name]) for r in rows if not math.isnan(float(r[name]))]
        mean = math.fsum(values) / len(values)
        std = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1))
        summary = getattr(report, name)
        assert summary.n == len(values)
        assert abs(summary.mean - mean) <= 1e-12
        assert abs(summary.std - std) <= 1e-12


def test_reference_comparison_table():
    s = MetricSummary.of([1.0, 3.0])
    text = format_reference_comparison(
        [MetricReport(AgentTag.OUR, s, s, s, s), MetricReport(AgentTag.ORACLE, s, s, s, s)]
    )
    lines = text.splitlines()
    assert len(lines) == 1 + 8
    assert "34.78 ± 6.88" in lines[1]
    assert lines[1].startswith("OUR")
    assert lines[-1].rstrip().endswith("-")
    assert "2.00 ± 1.41" in lines[1]


@pytest.mark.parametrize("agent", [AgentTag.BL1, AgentTag.BL2, AgentTag.NO_L])
def test_reference_rows_exist(agent):
    s = MetricSummary.of([0.0])
    text = format_reference_comparison([MetricReport(agent, s, s, s, s)])
    assert "-" not in text.splitlines()[1].split()[-1]
