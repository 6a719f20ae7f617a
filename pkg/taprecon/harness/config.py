"""
Experiment configuration: a pydantic model tree read from YAML.

Every field has a default, so an empty file describes the full-size setup
(4x4 sensor, 40x40 HR grid, 2x state region, 30 taps, active policy).
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Tuple

import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from taprecon.core.config import settings
from taprecon.core.errors import ConfigError
from taprecon.explorer.maps import DEFAULT_TRANSITION_RATE
from taprecon.explorer.policy import Policy, POLICIES
from taprecon.geometry.grid import GridSpec
from taprecon.geometry.motion import ActionSpace
from taprecon.metrics.quality import SSIM_WINDOW
from taprecon.recon.state import PriorConfig
from taprecon.sensor.model import AXES, Axis, SensorConfig
from taprecon.simulator.surface import DiskShape, SurfaceSource, surface_id


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class SimulatorConfig(_Section):
    """Simulator-side overrides; unset gammas follow ``sensor``."""

    gamma_x: float | None = Field(default=None, gt=0.0)
    gamma_y: float | None = Field(default=None, gt=0.0)
    gamma_z: float | None = Field(default=None, gt=0.0)
    noise: bool = True

    def sensor_config(self, base: SensorConfig) -> SensorConfig:
        """The sensor the simulator synthesizes readings with."""
        overrides = {
            f"gamma_{axis}": getattr(self, f"gamma_{axis}")
            for axis in AXES
            if getattr(self, f"gamma_{axis}") is not None
        }
        # Frames carry all three axes whatever the filter uses.
        return base.model_copy(update={**overrides, "axes": AXES})

    @property
    def mismatched(self) -> bool:
        """True when any simulator gamma differs from the filter's."""
        return any(getattr(self, f"gamma_{axis}") is not None for axis in AXES)


class ExplorerConfig(_Section):
    transition_rate: float = Field(default=DEFAULT_TRANSITION_RATE, ge=0.0)
    policy: Policy = "active"
    x_step: float = Field(default=0.5, gt=0.0, description="translation step in mm")
    dtheta_deg: float | None = Field(
        default=5.0, gt=0.0, description="rotation step in degrees; null disables rotation"
    )

    @property
    def theta_step(self) -> float | None:
        return None if self.dtheta_deg is None else math.radians(self.dtheta_deg)

    def action_space(self, grid: GridSpec) -> ActionSpace:
        return ActionSpace.build(grid, self.x_step, self.theta_step)


class EpisodeConfig(_Section):
    taps: int = Field(default=30, ge=1)
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    snapshot_taps: Tuple[int, ...] = (1, 10, 30)
    policies: List[Policy] = Field(default_factory=lambda: list(POLICIES), min_length=1)
    sensor_axes: List[Tuple[Axis, ...]] = Field(
        default_factory=list,
        description="filter axis sets a suite sweeps; empty runs sensor.axes only",
    )
    check_eigenvalues: bool = False

    @field_validator("sensor_axes")
    @classmethod
    def _canonical_variants(cls, value: List[Tuple[Axis, ...]]) -> List[Tuple[Axis, ...]]:
        variants = []
        for axes in value:
            if not axes or len(set(axes)) != len(axes):
                raise ValueError(f"invalid axis set {list(axes)}")
            variants.append(tuple(axis for axis in AXES if axis in axes))
        if len(set(variants)) != len(variants):
            raise ValueError("sensor_axes variants must not repeat")
        return variants

    def snapshots(self, start: int = 0) -> Tuple[int, ...]:
        """Snapshot taps inside the budget of a run resumed after ``start`` taps."""
        return tuple(
            t for t in sorted(set(self.snapshot_taps)) if start < t <= start + self.taps
        )


class ExperimentConfig(_Section):
    grid: GridSpec = Field(default_factory=GridSpec)
    prior: PriorConfig = Field(default_factory=PriorConfig)
    sensor: SensorConfig = Field(default_factory=SensorConfig)
    simulator: SimulatorConfig = Field(default_factory=SimulatorConfig)
    explorer: ExplorerConfig = Field(default_factory=ExplorerConfig)
    episode: EpisodeConfig = Field(default_factory=EpisodeConfig)
    surfaces: List[SurfaceSource] = Field(
        default_factory=lambda: [DiskShape(id="disk", radius=10.0)], min_length=1
    )
    output_dir: Path = Field(default_factory=lambda: settings.OUTPUT_DIR)

    @model_validator(mode="after")
    def _unique_surface_ids(self) -> "ExperimentConfig":
        ids = [surface_id(source) for source in self.surfaces]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise ValueError(f"surface ids must be unique, repeated: {duplicates}")
        return self

    @model_validator(mode="after")
    def _grid_fits_episode(self) -> "ExperimentConfig":
        # ssim_state is scored over the whole state map.
        if self.grid.state_taxels < SSIM_WINDOW:
            raise ValueError(
                f"the state grid needs at least {SSIM_WINDOW} cells per side, "
                f"got {self.grid.state_taxels}"
            )
        # Simulated taps always synthesize the Sobel-based X/Y readings.
        if self.grid.hr_taxels < 3:
            raise ValueError(f"hr_taxels must be at least 3, got {self.grid.hr_taxels}")
        return self

    def with_axes(self, axes: Tuple[Axis, ...]) -> "ExperimentConfig":
        """Copy whose filter uses only ``axes``."""
        sensor = SensorConfig.model_validate({**self.sensor.model_dump(), "axes": axes})
        return self.model_copy(update={"sensor": sensor})

    def axis_variants(self) -> List[Tuple[Axis, ...]]:
        return list(self.episode.sensor_axes) or [self.sensor.axes]

    def surface(self, surface_id_: str) -> SurfaceSource:
        for source in self.surfaces:
            if surface_id(source) == surface_id_:
                return source
        raise ConfigError(f"no surface with id {surface_id_!r}")

    @property
    def surface_ids(self) -> List[str]:
        return [surface_id(source) for source in self.surfaces]


def parse_config(raw: Dict[str, Any] | None, base_dir: Path | None = None) -> ExperimentConfig:
    """
    Validate a raw mapping into an ExperimentConfig.

    Args:
        raw: Parsed YAML (``None`` for an empty file)
        base_dir: Directory relative image paths are resolved against

    Raises:
        ConfigError: With the pydantic error list attached
    """
    raw = raw or {}
    if not isinstance(raw, dict):
        raise ConfigError("experiment config must be a mapping")
    context = {"base_dir": base_dir} if base_dir is not None else None
    try:
        return ExperimentConfig.model_validate(raw, context=context)
    except ValidationError as e:
        errors = json.loads(e.json(include_url=False))
        raise ConfigError(f"invalid experiment config: {e.error_count()} error(s)", errors) from e


def load_config(
    path: Path | None = None, overrides: List[str] | None = None
) -> ExperimentConfig:
    """
    Read a YAML config, apply ``section.key=value`` overrides and validate.

    With no path, the defaults (plus overrides) are used.
    """
    raw: Dict[str, Any] = {}
    base_dir = None
    if path is not None:
        path = Path(path)
        try:
            raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigError(f"config {path} is not valid YAML: {e}") from e
        base_dir = path.parent
    if overrides:
        raw = apply_overrides(raw, overrides)
    return parse_config(raw, base_dir)


def dump_config(config: ExperimentConfig) -> str:
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False)


def save_config(config: ExperimentConfig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_config(config), encoding="utf-8")
    return path


def apply_overrides(raw: Dict[str, Any], overrides: List[str]) -> Dict[str, Any]:
    """
    Apply dotted ``a.b.c=value`` assignments to a copy of ``raw``.

    Values are parsed as YAML scalars, so ``taps=5`` sets an int and
    ``seeds=[0, 1]`` a list. Integer path segments index into lists.
    """
    result = json.loads(json.dumps(raw, default=str))
    for override in overrides:
        key, sep, text = override.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"override {override!r} is not of the form key=value")
        try:
            value = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ConfigError(f"override {override!r} has an unparsable value") from e

        parts = key.strip().split(".")
        node: Any = result
        try:
            for part in parts[:-1]:
                if isinstance(node, list):
                    node = node[int(part)]
                else:
                    node = node.setdefault(part, {})
            if isinstance(node, list):
                node[int(parts[-1])] = value
            elif isinstance(node, dict):
                node[parts[-1]] = value
            else:
                raise TypeError(f"{type(node).__name__} is not a section")
        except (IndexError, ValueError, TypeError) as e:
            raise ConfigError(f"override {override!r} does not address a config field: {e}") from e
    return result
