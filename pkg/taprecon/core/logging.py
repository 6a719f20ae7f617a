"""
Structured logging configuration for the application.

Library code logs through the ``log_*`` helpers; any ``extra`` mapping passed
to them is rendered after the message as ``key=value`` pairs.
"""

import logging
import sys
from typing import Any, Dict

from .config import settings

LOGGER_NAME = "taprecon"

# Attributes every LogRecord carries; anything else came in through ``extra``.
_RESERVED = frozenset(
    vars(logging.LogRecord("", 0, "", 0, "", None, None)).keys()
) | {"message", "asctime", "context_keys"}


class ContextFormatter(logging.Formatter):
    """Formatter that appends the record's extra context."""

    def format(self, record: logging.LogRecord) -> str:
        base = super().format(record)
        keys = getattr(record, "context_keys", None) or sorted(
            key for key in vars(record) if key not in _RESERVED
        )
        if not keys:
            return base
        context = " ".join(f"{key}={getattr(record, key)!r}" for key in keys)
        return f"{base} | {context}"


def setup_logging() -> logging.Logger:
    """
    Configure and return the project logger.

    Returns:
        logging.Logger: Configured logger instance
    """
    level = getattr(logging, settings.LOG_LEVEL.upper())
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)

    # Prevent duplicate handlers
    if logger.handlers:
        return logger

    handler = logging.StreamHandler(sys.stdout)
    handler.setLevel(level)
    handler.setFormatter(
        ContextFormatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
    )
    logger.addHandler(handler)
    logger.propagate = False

    return logger


# Global logger instance
logger = setup_logging()


def _log(level: int, message: str, extra: Dict[str, Any] | None) -> None:
    if not extra:
        logger.log(level, message)
        return
    logger.log(level, message, extra={**extra, "context_keys": list(extra)})


def log_info(message: str, extra: Dict[str, Any] | None = None) -> None:
    """
    Log an info message with optional extra context.

    Args:
        message: The message to log
        extra: Optional dictionary of extra context
    """
    _log(logging.INFO, message, extra)


def log_error(message: str, extra: Dict[str, Any] | None = None) -> None:
    """Log an error message with optional extra context."""
    _log(logging.ERROR, message, extra)


def log_warning(message: str, extra: Dict[str, Any] | None = None) -> None:
    """Log a warning message with optional extra context."""
    _log(logging.WARNING, message, extra)


def log_debug(message: str, extra: Dict[str, Any] | None = None) -> None:
    """Log a debug message with optional extra context."""
    _log(logging.DEBUG, message, extra)
