"""
Protocol and Type Definitions.

This module defines the protocols (interfaces) shared between the
environment, the learner, the baselines and the evaluation harness.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Protocol, runtime_checkable

import numpy as np

if TYPE_CHECKING:
    from compactplace.models.assembly import AgentTag, AssemblyResult
    from compactplace.models.layout import Layout


@runtime_checkable
class Policy(Protocol):
    """
    Protocol for anything that maps an observation to an action.

    The learner implements it; tests use scripted stand-ins.
    """

    def act(self, obs: np.ndarray, deterministic: bool = True) -> np.ndarray:
        """Return an action in [-1, 1]^5 for a 58-entry observation."""
        ...


@runtime_checkable
class PlacementSource(Protocol):
    """
    Protocol for agents and planners that assemble a complete layout.

    Evaluation treats learned policies, baseline plans and the identity
    oracle uniformly through this interface.
    """

    @property
    def tag(self) -> "AgentTag":
        """Return the agent tag reported in results (OUR, BL1, ...)."""
        ...

    def assemble(self, layout: "Layout") -> "AssemblyResult":
        """Place every fragment of the layout in sequence order."""
        ...
