"""
Ground-truth surfaces: 8-bit grayscale images or procedural shapes.

Procedural shapes are given in mm in the state frame (origin at the first
tap's sensor center, Y up) and rasterized with 4x4 supersampling per cell.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, List, Literal, Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    TypeAdapter,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from taprecon.core.errors import SurfaceError
from taprecon.geometry.grid import GridSpec, axis_centers

SUPERSAMPLING = 4


class _Shape(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str | None = None
    level: float = Field(default=1.0, ge=0.0, le=1.0)

    def inside(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def values(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.where(self.inside(x, y), self.level, 0.0)


def _local(x: np.ndarray, y: np.ndarray, cx: float, cy: float, angle_deg: float):
    c, s = math.cos(math.radians(angle_deg)), math.sin(math.radians(angle_deg))
    dx, dy = x - cx, y - cy
    return c * dx + s * dy, -s * dx + c * dy


class DiskShape(_Shape):
    kind: Literal["disk"] = "disk"
    cx: float = 0.0
    cy: float = 0.0
    radius: float = Field(gt=0.0)

    def inside(self, x, y):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 <= self.radius**2


class RectangleShape(_Shape):
    kind: Literal["rectangle"] = "rectangle"
    cx: float = 0.0
    cy: float = 0.0
    width: float = Field(gt=0.0)
    height: float = Field(gt=0.0)
    angle_deg: float = 0.0

    def inside(self, x, y):
        u, v = _local(x, y, self.cx, self.cy, self.angle_deg)
        return (np.abs(u) <= self.width / 2.0) & (np.abs(v) <= self.height / 2.0)


class RingShape(_Shape):
    kind: Literal["ring"] = "ring"
    cx: float = 0.0
    cy: float = 0.0
    inner_radius: float = Field(ge=0.0)
    outer_radius: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _check_radii(self) -> "RingShape":
        if self.outer_radius <= self.inner_radius:
            raise ValueError("outer_radius must exceed inner_radius")
        return self

    def inside(self, x, y):
        r2 = (x - self.cx) ** 2 + (y - self.cy) ** 2
        return (r2 >= self.inner_radius**2) & (r2 <= self.outer_radius**2)


class CrossShape(_Shape):
    kind: Literal["cross"] = "cross"
    cx: float = 0.0
    cy: float = 0.0
    arm_length: float = Field(gt=0.0, description="tip-to-tip length of each bar")
    arm_width: float = Field(gt=0.0)
    angle_deg: float = 0.0

    def inside(self, x, y):
        u, v = _local(x, y, self.cx, self.cy, self.angle_deg)
        half_l, half_w = self.arm_length / 2.0, self.arm_width / 2.0
        horizontal = (np.abs(u) <= half_l) & (np.abs(v) <= half_w)
        vertical = (np.abs(u) <= half_w) & (np.abs(v) <= half_l)
        return horizontal | vertical


class PolylineShape(_Shape):
    """A stroke of constant width along a polyline, e.g. a letter."""

    kind: Literal["polyline"] = "polyline"
    points: List[Tuple[float, float]] = Field(min_length=2)
    width: float = Field(gt=0.0)

    def inside(self, x, y):
        hit = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        limit = (self.width / 2.0) ** 2
        for (ax, ay), (bx, by) in zip(self.points[:-1], self.points[1:]):
            sx, sy = bx - ax, by - ay
            length2 = sx * sx + sy * sy
            if length2 == 0.0:
                t = np.zeros_like(hit, dtype=np.float64)
            else:
                t = np.clip(((x - ax) * sx + (y - ay) * sy) / length2, 0.0, 1.0)
            hit |= (x - ax - t * sx) ** 2 + (y - ay - t * sy) ** 2 <= limit
        return hit


class CompositeShape(_Shape):
    """Union of shapes; overlapping parts keep the highest level."""

    kind: Literal["composite"] = "composite"
    parts: List["ShapeDescriptor"] = Field(min_length=1)

    def inside(self, x, y):
        return self.values(x, y) > 0.0

    def values(self, x, y):
        return np.maximum.reduce([part.values(x, y) for part in self.parts])


class ImageSource(BaseModel):
    """An 8-bit grayscale PNG or binary PGM covering the whole state region."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["image"] = "image"
    id: str | None = None
    path: Path

    @field_validator("path")
    @classmethod
    def _resolve_path(cls, value: Path, info: ValidationInfo) -> Path:
        base = (info.context or {}).get("base_dir")
        if base is not None and not value.is_absolute():
            value = Path(base) / value
        if not value.is_file():
            raise ValueError(f"surface image {value} does not exist")
        # Absolute, so a saved config reloads from any directory.
        return value.resolve()


ShapeDescriptor = Annotated[
    Union[DiskShape, RectangleShape, RingShape, CrossShape, PolylineShape, CompositeShape],
    Field(discriminator="kind"),
]
SurfaceSource = Annotated[
    Union[
        ImageSource,
        DiskShape,
        RectangleShape,
        RingShape,
        CrossShape,
        PolylineShape,
        CompositeShape,
    ],
    Field(discriminator="kind"),
]
CompositeShape.model_rebuild()

_SOURCE_ADAPTER: TypeAdapter = TypeAdapter(SurfaceSource)


def surface_id(source: BaseModel) -> str:
    return source.id or source.kind


@dataclass(frozen=True, eq=False)
class GroundTruthSurface:
    """Hidden true state map, ``[row, col]`` with rows along +Y, values in [0, 1]."""

    heights: np.ndarray
    side: float
    source: str

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.heights)):
            raise SurfaceError("surface holds non-finite values")
        if self.heights.min(initial=0.0) < 0.0 or self.heights.max(initial=0.0) > 1.0:
            raise SurfaceError("surface values must lie in [0, 1]")

    @property
    def vector(self) -> np.ndarray:
        return self.heights.ravel()


def rasterize(shape: _Shape, grid: GridSpec) -> np.ndarray:
    """Average of ``shape`` over a 4x4 sub-grid in every state cell."""
    side = grid.state_taxels
    fine = axis_centers(grid.state_side, side * SUPERSAMPLING)
    xs, ys = np.meshgrid(fine, fine)
    values = shape.values(xs, ys).astype(np.float64)
    return values.reshape(side, SUPERSAMPLING, side, SUPERSAMPLING).mean(axis=(1, 3))


def _read_image(path: Path, side: int) -> np.ndarray:
    try:
        with Image.open(path) as image:
            image.load()
            if image.mode != "L":
                raise SurfaceError(
                    f"{path} is not 8-bit grayscale (mode {image.mode!r})"
                )
            pixels = np.asarray(image, dtype=np.float64) / 255.0
    except (OSError, UnidentifiedImageError) as e:
        raise SurfaceError(f"cannot read surface image {path}: {e}") from e

    if pixels.shape != (side, side):
        resized = Image.fromarray(pixels.astype(np.float32)).resize(
            (side, side), Image.Resampling.BILINEAR
        )
        pixels = np.asarray(resized, dtype=np.float64)
    # Image rows run top to bottom, state rows run along +Y.
    return np.clip(np.flipud(pixels), 0.0, 1.0)


def load_surface(source: BaseModel | dict, grid: GridSpec) -> GroundTruthSurface:
    """
    Build the ground-truth state map for a grid.

    Args:
        source: An image source, a shape descriptor, or their mapping form
        grid: Grid geometry

    Returns:
        GroundTruthSurface: (alpha M) x (alpha M) map in [0, 1]

    Raises:
        SurfaceError: Unreadable file, wrong bit depth or invalid descriptor
    """
    if isinstance(source, dict):
        try:
            source = _SOURCE_ADAPTER.validate_python(source)
        except ValidationError as e:
            raise SurfaceError(f"invalid surface descriptor: {e}") from e

    if isinstance(source, ImageSource):
        heights = _read_image(source.path, grid.state_taxels)
        tag = str(source.path)
    elif isinstance(source, _Shape):
        heights = rasterize(source, grid)
        tag = source.model_dump_json(exclude={"id"})
    else:
        raise SurfaceError(f"unsupported surface source {type(source).__name__}")

    return GroundTruthSurface(heights=heights, side=grid.state_side, source=tag)
