"""
8-bit grayscale image output for state maps.
"""

from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image

from taprecon.core.errors import DimensionError, SurfaceError

SEPARATOR = 2


def to_pixels(values: np.ndarray) -> np.ndarray:
    """``[row, col]`` map in [0, 1] with rows along +Y -> uint8 image, top row first."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise DimensionError(f"expected a 2-D map, got shape {values.shape}")
    scaled = np.rint(np.clip(values, 0.0, 1.0) * 255.0).astype(np.uint8)
    return np.ascontiguousarray(np.flipud(scaled))


def write_image(path: Path, values: np.ndarray) -> Path:
    """Write a map as PNG or binary PGM, chosen by the file suffix."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    image = Image.fromarray(to_pixels(values))
    if path.suffix.lower() == ".pgm":
        image.save(path, format="PPM")
    else:
        image.save(path, format="PNG")
    return path


def read_pixels(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as image:
            return np.asarray(image.convert("L"))
    except OSError as e:
        raise SurfaceError(f"cannot read image {path}: {e}") from e


def compose_row(tiles: Sequence[np.ndarray], background: int = 255) -> np.ndarray:
    """Place uint8 tiles side by side, top-aligned, with a thin separator."""
    if not tiles:
        raise DimensionError("nothing to compose")
    height = max(tile.shape[0] for tile in tiles)
    width = sum(tile.shape[1] for tile in tiles) + SEPARATOR * (len(tiles) - 1)
    canvas = np.full((height, width), background, dtype=np.uint8)
    col = 0
    for tile in tiles:
        canvas[: tile.shape[0], col : col + tile.shape[1]] = tile
        col += tile.shape[1] + SEPARATOR
    return canvas


def compose_grid(rows: Sequence[Sequence[np.ndarray]], background: int = 255) -> np.ndarray:
    composed = [compose_row(row, background) for row in rows]
    width = max(row.shape[1] for row in composed)
    height = sum(row.shape[0] for row in composed) + SEPARATOR * (len(composed) - 1)
    canvas = np.full((height, width), background, dtype=np.uint8)
    top = 0
    for row in composed:
        canvas[top : top + row.shape[0], : row.shape[1]] = row
        top += row.shape[0] + SEPARATOR
    return canvas


def save_pixels(path: Path, pixels: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.ascontiguousarray(pixels, dtype=np.uint8)).save(path, format="PNG")
    return path
