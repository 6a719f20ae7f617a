"""
Exception hierarchy shared by the library, the CLI and the HTTP service.
"""

from typing import Any, List


class TapReconError(Exception):
    """Base class for every error raised on purpose by this package."""

    exit_code = 2


class ConfigError(TapReconError):
    """Invalid experiment configuration."""

    exit_code = 1

    def __init__(self, message: str, errors: List[Any] | None = None):
        super().__init__(message)
        self.errors = errors or []


class GridError(TapReconError):
    """Grid geometry that an operation cannot work with."""


class DimensionError(TapReconError):
    """Vector or matrix with the wrong shape for the grid it is used with."""


class CovarianceError(TapReconError):
    """Covariance that is not (numerically) positive definite."""


class SurfaceError(TapReconError):
    """Ground-truth surface that cannot be loaded or rasterized."""


class EpisodeError(TapReconError):
    """Failure inside an episode, tagged with the tap it happened at."""

    def __init__(self, message: str, tap_index: int):
        super().__init__(f"tap {tap_index}: {message}")
        self.tap_index = tap_index
