"""Active exploration: decision maps and next-tap selection."""

from .maps import (
    DEFAULT_TRANSITION_RATE,
    DecisionMaps,
    decision_maps,
    gradient_map,
    uncertain_map,
)
from .policy import POLICIES, Policy, best_index, footprint_scores, select_action

__all__ = [
    "DEFAULT_TRANSITION_RATE",
    "DecisionMaps",
    "POLICIES",
    "Policy",
    "best_index",
    "decision_maps",
    "footprint_scores",
    "gradient_map",
    "select_action",
    "uncertain_map",
]
