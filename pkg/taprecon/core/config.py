"""
Process-level configuration using pydantic-settings.

Experiment parameters live in YAML files (see ``taprecon.harness.config``);
this module only holds knobs that belong to the running process.
"""

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Logging Configuration
    LOG_LEVEL: str = "INFO"

    # Parallelism
    SCORING_WORKERS: int = Field(default=8, ge=1)
    SUITE_WORKERS: int = Field(default=8, ge=1)

    # Experiment defaults
    DEFAULT_CONFIG_PATH: Path | None = None
    OUTPUT_DIR: Path = Path("runs")

    model_config = SettingsConfigDict(
        env_file=".env.local", extra="ignore", case_sensitive=True
    )


# Global settings instance
settings = Settings()
