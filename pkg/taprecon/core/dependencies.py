"""
Dependency injection providers for the HTTP service.
"""

from typing import Annotated

from fastapi import Depends

from .config import Settings, settings


def get_settings() -> Settings:
    """
    Dependency provider for process settings.

    Returns:
        Settings: The global settings instance
    """
    return settings


# Type aliases for dependency injection
SettingsDep = Annotated[Settings, Depends(get_settings)]
