"""
Reference Figures.

Published metric figures of the four compared agents, printed next to
measured reports for manual inspection.
"""

from __future__ import annotations

from typing import Iterable

from compactplace.models.assembly import AgentTag, MetricReport

# (mean, std) of bb increase %, angle diff deg, mean dist mm, collision rate %
REFERENCE_TABLE: dict[AgentTag, tuple[tuple[float, float], ...]] = {
    AgentTag.OUR: ((34.78, 6.88), (3.32, 1.17), (10.73, 1.64), (8.92, 7.44)),
    AgentTag.BL1: ((67.68, 14.33), (0.14, 0.11), (26.22, 2.36), (0.0, 0.0)),
    AgentTag.BL2: ((330.46, 37.86), (0.15, 0.13), (25.28, 2.04), (0.0, 0.0)),
    AgentTag.NO_L: ((43.27, 15.48), (5.69, 3.28), (4.44, 1.28), (49.18, 10.23)),
}

_METRICS = (
    ("BB [%]", "bb_increase_pct"),
    ("Angle [deg]", "angle_diff_deg"),
    ("Dist [mm]", "mean_dist_mm"),
    ("Coll. [%]", "collision_rate_pct"),
)


def format_reference_comparison(reports: Iterable[MetricReport]) -> str:
    """
    Plain-text table of measured against reference figures.

    Agents without reference figures are listed with "-" in the
    reference column.
    """
    lines = [f"{'agent':<8}{'metric':<14}{'measured':>20}{'reference':>20}"]
    for report in reports:
        ref = REFERENCE_TABLE.get(report.agent)
        for i, (label, attr) in enumerate(_METRICS):
            measured = str(getattr(report, attr))
            reference = f"{ref[i][0]:.2f} ± {ref[i][1]:.2f}" if ref else "-"
            lines.append(f"{report.agent.value:<8}{label:<14}{measured:>20}{reference:>20}")
    return "\n".join(lines) + "\n"
