"""Active tactile super-resolution: Kalman reconstruction with tap selection."""

__version__ = "1.0.0"
