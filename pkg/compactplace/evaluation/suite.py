"""
Suite Evaluation.

This module runs an assembly source over a set of layouts, scores every
assembly and aggregates the scores into a MetricReport. Layouts are
assembled on a thread pool whose size COMPACT_PLACE_THREADS caps; results
are gathered in input order.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Sequence

from compactplace.core.exceptions import ConfigError, GeometryError
from compactplace.core.types import PlacementSource
from compactplace.evaluation.metrics import (
    collision_rate,
    metric_angle_diff,
    metric_bb_increase,
    metric_mean_object_distance,
)
from compactplace.logs.handlers import get_progress_logger
from compactplace.models.assembly import AssemblyResult, MetricReport, MetricSummary
from compactplace.models.layout import Layout

logger = logging.getLogger(__name__)
progress = get_progress_logger()

THREADS_ENV = "COMPACT_PLACE_THREADS"

SCORE_COLUMNS = (
    "layout_id",
    "bb_increase_pct",
    "angle_diff_deg",
    "mean_dist_mm",
    "collision_rate_pct",
    "episodes",
    "collisions",
    "plan_info",
)


def worker_count(default: int | None = None) -> int:
    """
    Worker threads for per-layout work.

    Raises:
        ConfigError: If COMPACT_PLACE_THREADS is not a positive integer.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return default or min(8, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class LayoutScore:
    """
    Metrics of one assembled layout.

    Metrics that need more placed fragments than the assembly has are NaN.
    """

    layout_id: str
    bb_increase_pct: float
    angle_diff_deg: float
    mean_dist_mm: float
    collision_rate_pct: float
    episodes: int
    collisions: int
    plan_info: str = ""


def _plan_info(metadata: dict[str, Any]) -> str:
    if "k" in metadata:
        return f"k={metadata['k']}"
    if "total_shifts" in metadata:
        return f"shifts={metadata['total_shifts']}"
    return ""


def score_assembly(result: AssemblyResult, layout: Layout) -> LayoutScore:
    """Score one assembly."""

    def guarded(fn, *args) -> float:
        try:
            return fn(*args)
        except GeometryError as exc:
            logger.warning("%s: %s", layout.layout_id, exc)
            return float("nan")

    return LayoutScore(
        layout_id=layout.layout_id,
        bb_increase_pct=guarded(metric_bb_increase, result, layout),
        angle_diff_deg=guarded(metric_angle_diff, result, layout),
        mean_dist_mm=guarded(metric_mean_object_distance, result, layout),
        collision_rate_pct=collision_rate(result),
        episodes=result.episodes,
        collisions=len(result.collided_ids),
        plan_info=_plan_info(result.metadata),
    )


def aggregate(agent, scores: Sequence[LayoutScore]) -> MetricReport:
    """Mean and sample std of every metric over the layouts that have it."""

    def summary(name: str) -> MetricSummary:
        values = [getattr(s, name) for s in scores]
        return MetricSummary.of([v for v in values if v == v])

    return MetricReport(
        agent=agent,
        bb_increase_pct=summary("bb_increase_pct"),
        angle_diff_deg=summary("angle_diff_deg"),
        mean_dist_mm=summary("mean_dist_mm"),
        collision_rate_pct=summary("collision_rate_pct"),
    )


def write_scores(scores: Sequence[LayoutScore], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(SCORE_COLUMNS)
        for s in scores:
            row = asdict(s)
            writer.writerow(
                [
                    row[c] if not isinstance(row[c], float) else repr(row[c])
                    for c in SCORE_COLUMNS
                ]
            )


def evaluate_suite(
    source: PlacementSource,
    layouts: Sequence[Layout],
    out_dir: str | Path | None = None,
    threads: int | None = None,
) -> tuple[MetricReport, list[AssemblyResult]]:
    """
    Assemble and score every layout.

    Args:
        source: Assembly source.
        layouts: Layouts to assemble.
        out_dir: When given, receives ``<tag>_layouts.csv``,
            ``<tag>_summary.json`` and one result JSON per layout under
            ``results/<tag>/``.
        threads: Worker threads; COMPACT_PLACE_THREADS or a CPU-based
            default when omitted.

    Returns:
        The aggregated report and the per-layout results in input order.

    Raises:
        ConfigError: If ``layouts`` is empty.
    """
    if not layouts:
        raise ConfigError("evaluation needs at least one layout")
    workers = threads or worker_count()
    tag = source.tag
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(source.assemble, layouts))
    for result, layout in zip(results, layouts):
        result.validate(layout.sequence)
    scores = [score_assembly(r, l) for r, l in zip(results, layouts)]
    report = aggregate(tag, scores)
    progress.info("%s over %d layouts: %s", tag.value, len(layouts), report)

    if out_dir is not None:
        out = Path(out_dir)
        name = tag.value.lower().replace("-", "_")
        write_scores(scores, out / f"{name}_layouts.csv")
        (out / f"{name}_summary.json").write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        results_dir = out / "results" / name
        results_dir.mkdir(parents=True, exist_ok=True)
        for result in results:
            (results_dir / f"{result.layout_id}.json").write_text(
                json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        logger.info("wrote %s report to %s", tag.value, out)
    return report, results
