"""
Pydantic schemas for the HTTP service.
"""

import math
from typing import Any, Dict, List

from pydantic import BaseModel, Field, field_serializer

from taprecon.explorer.policy import Policy
from taprecon.metrics.episode_log import EpisodeMetadata, TapRecord


class HealthCheckResponse(BaseModel):
    """Response model for health check endpoint."""

    status: str


class ValidationResponse(BaseModel):
    """Outcome of validating an experiment config."""

    valid: bool
    errors: List[Dict[str, Any]] = Field(default_factory=list)


class EpisodeRequest(BaseModel):
    """Request model for running one episode."""

    config: Dict[str, Any] = Field(default_factory=dict)
    surface_id: str | None = None
    policy: Policy | None = None
    seed: int | None = None


class EpisodeResponse(BaseModel):
    """Episode log: metadata plus one record per tap."""

    metadata: EpisodeMetadata
    records: List[TapRecord]
    violations: List[str] = Field(default_factory=list)

    @field_serializer("records", when_used="json")
    def _records_without_nan(self, records: List[TapRecord]) -> List[Dict[str, Any]]:
        # JSON has no NaN; ssim_patch is NaN on grids smaller than the SSIM window.
        return [
            {
                key: None if isinstance(value, float) and not math.isfinite(value) else value
                for key, value in record.model_dump().items()
            }
            for record in records
        ]
