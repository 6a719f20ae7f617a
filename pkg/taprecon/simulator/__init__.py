"""Simulated sensor and hidden ground-truth surfaces."""

from .surface import (
    CompositeShape,
    CrossShape,
    DiskShape,
    GroundTruthSurface,
    ImageSource,
    PolylineShape,
    RectangleShape,
    RingShape,
    SurfaceSource,
    load_surface,
    rasterize,
    surface_id,
)
from .tap import TapCommand, execute_tap

__all__ = [
    "CompositeShape",
    "CrossShape",
    "DiskShape",
    "GroundTruthSurface",
    "ImageSource",
    "PolylineShape",
    "RectangleShape",
    "RingShape",
    "SurfaceSource",
    "TapCommand",
    "execute_tap",
    "load_surface",
    "rasterize",
    "surface_id",
]
