"""Kalman reconstruction of the contact surface."""

from .checkpoint import (
    checkpoint_bytes,
    load_checkpoint,
    restore_checkpoint,
    save_checkpoint,
)
from .state import (
    CovarianceReport,
    PriorConfig,
    StateEstimate,
    covariance_report,
    init_state,
    prior_covariance,
)
from .update import ObservationFrame, predict_hr, update_axis, update_tap

__all__ = [
    "CovarianceReport",
    "ObservationFrame",
    "PriorConfig",
    "StateEstimate",
    "checkpoint_bytes",
    "covariance_report",
    "init_state",
    "load_checkpoint",
    "predict_hr",
    "prior_covariance",
    "restore_checkpoint",
    "save_checkpoint",
    "update_axis",
    "update_tap",
]
