"""
Main FastAPI application entry point.
"""

from contextlib import asynccontextmanager

from fastapi import FastAPI, status

from taprecon import __version__
from taprecon.core.logging import log_info, logger
from taprecon.core.schemas import HealthCheckResponse
from taprecon.experiments.router import router as experiments_router


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info("Starting taprecon API")
    yield
    logger.info("Shutting down taprecon API")


app = FastAPI(
    title="taprecon API",
    description="Active tactile super-resolution experiments",
    version=__version__,
    lifespan=lifespan,
)

# Include routers
app.include_router(experiments_router)


@app.get(
    "/api/health",
    response_model=HealthCheckResponse,
    status_code=status.HTTP_200_OK,
    tags=["health"],
)
async def health_check() -> HealthCheckResponse:
    """
    Health check endpoint.

    Returns:
        HealthCheckResponse: Health status
    """
    log_info("Health check called", extra={"endpoint": "/api/health"})
    return HealthCheckResponse(status="healthy")
