"""
Experiments router: config validation and single episodes over HTTP.
"""

from typing import Any, Dict

from fastapi import APIRouter, Body, HTTPException, status
from starlette.concurrency import run_in_threadpool

from taprecon.core.dependencies import SettingsDep
from taprecon.core.errors import ConfigError, TapReconError
from taprecon.core.logging import log_error, log_info
from taprecon.core.schemas import EpisodeRequest, EpisodeResponse, ValidationResponse
from taprecon.harness.config import parse_config
from taprecon.harness.episode import run_episode

router = APIRouter(prefix="/api/experiments", tags=["experiments"])


@router.post("/validate", response_model=ValidationResponse, status_code=status.HTTP_200_OK)
async def validate_config(raw: Dict[str, Any] = Body(...)) -> ValidationResponse:
    """
    Validate an experiment config without running it.

    Args:
        raw: Experiment config mapping, as it would appear in YAML

    Returns:
        ValidationResponse: ``valid`` plus the error list when invalid
    """
    try:
        parse_config(raw)
    except ConfigError as e:
        return ValidationResponse(valid=False, errors=e.errors or [{"msg": str(e)}])
    return ValidationResponse(valid=True)


@router.post("/episode", response_model=EpisodeResponse, status_code=status.HTTP_200_OK)
async def run_single_episode(request: EpisodeRequest, settings: SettingsDep) -> EpisodeResponse:
    """
    Run one episode and return its log.

    Args:
        request: Config mapping, surface id, policy and seed
        settings: Settings dependency

    Returns:
        EpisodeResponse: Metadata and per-tap records

    Raises:
        HTTPException: 422 for config errors, 500 for runtime failures
    """
    try:
        config = parse_config(request.config)
        if request.surface_id is not None:
            config.surface(request.surface_id)
        log_info(
            "Episode requested",
            extra={"surface": request.surface_id, "policy": request.policy, "seed": request.seed},
        )
        result = await run_in_threadpool(
            run_episode,
            config,
            request.surface_id,
            request.policy,
            request.seed,
            workers=settings.SCORING_WORKERS,
        )
    except ConfigError as e:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail={"message": str(e), "errors": e.errors},
        )
    except TapReconError as e:
        log_error("Episode request failed", extra={"error": str(e)})
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Error running episode: {e}",
        )

    return EpisodeResponse(
        metadata=result.log.metadata,
        records=list(result.log.records),
        violations=result.violations,
    )
