"""
Observation Builder.

Layout of the 58-entry vector (all entries in [0, 1]):

====== ===== =========================================================
index  size  content
====== ===== =========================================================
0      36    6 neighbor slots x 2 corners x (x, y, z) displacement
36     12    2 lines (l_x, l_y) x 2 anchors x (x, y, z) displacement
48     4     EE pose (x, y, z, theta)
52     3     retract goal (x, y, z)
55     1     placing object heading error
56     1     placing object borders a reference line
57     1     task state q / 3
====== ===== =========================================================

Displacements map through (v / d_norm + 1) / 2; positions map by the
workspace box. Entries not available in the current task state are 0.
"""

from __future__ import annotations

import numpy as np

from compactplace.env.config import EnvConfig
from compactplace.env.constraints import LINES, corner_displacements, line_displacements
from compactplace.geom.polygon import bounding_box
from compactplace.models.episode import EnvState, TaskState
from compactplace.models.geometry import wrap_angle
from compactplace.models.layout import Layout

OBS_SIZE = 58
MAX_NEIGHBOR_SLOTS = 6
CORNER_BLOCK = slice(0, 36)
LINE_BLOCK = slice(36, 48)
EE_POSE = slice(48, 52)
RETRACT_GOAL = slice(52, 55)
OBJ_THETA = 55
LINE_BOOL = 56
TASK_STATE = 57


def workspace_bounds(layout: Layout, config: EnvConfig) -> tuple[np.ndarray, np.ndarray]:
    """EE box (lower, upper corners) centered on the layout in x and y."""
    lo, hi = bounding_box((f.shape, f.layout_pose) for f in layout.fragments)
    cx = 0.5 * (lo.x + hi.x)
    cy = 0.5 * (lo.y + hi.y)
    wx, wy, wz = config.workspace
    return (
        np.array([cx - wx / 2.0, cy - wy / 2.0, 0.0]),
        np.array([cx + wx / 2.0, cy + wy / 2.0, wz]),
    )


def _displacement(v: np.ndarray, d_norm: float) -> np.ndarray:
    return np.clip((np.asarray(v) / d_norm + 1.0) / 2.0, 0.0, 1.0)


def _position(p: np.ndarray, bounds: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    lo, hi = bounds
    return np.clip((np.asarray(p) - lo) / (hi - lo), 0.0, 1.0)


def build_observation(
    state: EnvState,
    layout: Layout,
    config: EnvConfig,
    bounds: tuple[np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """
    The 58-entry observation of a state.

    Args:
        state: Episode state.
        layout: Layout the episode runs on.
        config: Environment settings.
        bounds: Precomputed workspace bounds (see workspace_bounds).
    """
    obs = np.zeros(OBS_SIZE)
    bounds = bounds if bounds is not None else workspace_bounds(layout, config)
    d_norm = config.reward.d_norm

    if state.q == TaskState.PLACE:
        for slot, (_, disps) in enumerate(corner_displacements(state, layout)[:MAX_NEIGHBOR_SLOTS]):
            for c, disp in enumerate(disps[:2]):
                start = slot * 6 + c * 3
                obs[start : start + 3] = _displacement(disp, d_norm)

        lines = dict(line_displacements(state, layout, config.reward))
        for li, line in enumerate(LINES):
            for ai, disp in enumerate(lines.get(line, [])[:2]):
                start = LINE_BLOCK.start + li * 6 + ai * 3
                obs[start : start + 3] = _displacement(disp, d_norm)

        target = layout.fragment(state.placing_id).layout_pose.theta
        obs[OBJ_THETA] = (wrap_angle(state.placing_pose.theta - target) + 180.0) / 360.0
        flags = layout.line_flags[state.placing_id]
        obs[LINE_BOOL] = 1.0 if (config.reward.use_reference_lines and flags.any) else 0.0

    if state.q != TaskState.GRASP:
        ee = state.ee
        obs[EE_POSE.start : EE_POSE.start + 3] = _position([ee.x, ee.y, ee.z], bounds)
        obs[EE_POSE.start + 3] = (ee.theta + 180.0) / 360.0

    if state.q == TaskState.RETRACT and state.retract_goal is not None:
        obs[RETRACT_GOAL] = _position(state.retract_goal.as_array(), bounds)

    obs[TASK_STATE] = int(state.q) / 3.0
    return obs
