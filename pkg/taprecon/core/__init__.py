"""Core module for application-wide configuration, logging and errors."""

from .config import settings

__all__ = ["settings"]
