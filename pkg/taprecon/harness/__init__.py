"""Experiment orchestration: configuration, episodes, suites and rendering."""

from .config import (
    EpisodeConfig,
    ExperimentConfig,
    ExplorerConfig,
    SimulatorConfig,
    apply_overrides,
    dump_config,
    load_config,
    parse_config,
    save_config,
)
from .episode import EpisodeResult, run_episode
from .render import render_run
from .suite import SuiteResult, run_suite

__all__ = [
    "EpisodeConfig",
    "EpisodeResult",
    "ExperimentConfig",
    "ExplorerConfig",
    "SimulatorConfig",
    "SuiteResult",
    "apply_overrides",
    "dump_config",
    "load_config",
    "parse_config",
    "render_run",
    "run_episode",
    "run_suite",
    "save_config",
]
