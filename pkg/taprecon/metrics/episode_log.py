"""
Per-episode log: one record per tap plus immutable run metadata.

On disk an episode is three files sharing a stem:

    <stem>.csv         tap records, byte-identical for the same config and seed
    <stem>.json        metadata
    <stem>_timing.csv  wall-clock timings, which vary run to run
"""

from pathlib import Path
from typing import Dict, Iterator, List, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from taprecon.core.errors import TapReconError
from taprecon.geometry.grid import GridSpec
from taprecon.metrics.quality import SSIM_PARAMETERS

RECORD_COLUMNS = [
    "t",
    "x",
    "y",
    "theta",
    "ssim_state",
    "ssim_patch",
    "mse",
    "mse_visited",
    "trace",
]
TIMING_COLUMNS = ["t", "update_ms", "scoring_ms"]
FLOAT_FORMAT = "%.12g"


class TapRecord(BaseModel):
    t: int = Field(ge=1)
    x: float
    y: float
    theta: float
    ssim_state: float
    ssim_patch: float
    mse: float
    mse_visited: float
    trace: float
    update_ms: float = 0.0
    scoring_ms: float = 0.0


class EpisodeMetadata(BaseModel):
    model_config = ConfigDict(frozen=True)

    policy: str
    transition_rate: float
    seed: int
    surface_id: str
    grid: GridSpec
    noise: Dict[str, float]
    axes: Tuple[str, ...] = ("x", "y", "z")
    # Simulator gammas differ from the filter's.
    mismatched: bool = False
    # Taps already folded into the belief the episode started from.
    resumed_at: int = 0
    ssim: Dict[str, float] = Field(default_factory=lambda: dict(SSIM_PARAMETERS))


class EpisodeLog:
    """Tap records in strictly increasing ``t`` order."""

    def __init__(self, metadata: EpisodeMetadata, records: List[TapRecord] | None = None):
        self.metadata = metadata
        self._records: List[TapRecord] = []
        for record in records or []:
            self.append(record)

    def append(self, record: TapRecord) -> None:
        if self._records and record.t <= self._records[-1].t:
            raise TapReconError(
                f"tap records must be ordered by t; got {record.t} after {self._records[-1].t}"
            )
        self._records.append(record)

    @property
    def records(self) -> tuple[TapRecord, ...]:
        return tuple(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[TapRecord]:
        return iter(self._records)

    def column(self, name: str) -> list[float]:
        return [getattr(record, name) for record in self._records]

    def to_frame(self, timing: bool = False) -> pd.DataFrame:
        columns = TIMING_COLUMNS if timing else RECORD_COLUMNS
        return pd.DataFrame(
            [record.model_dump(include=set(columns)) for record in self._records],
            columns=columns,
        )

    def to_csv(self) -> str:
        return self.to_frame().to_csv(
            index=False, lineterminator="\r\n", float_format=FLOAT_FORMAT
        )

    def write(self, csv_path: Path) -> Path:
        """
        Write the records, the metadata sidecar and the timing file.

        Returns:
            Path: The main CSV path
        """
        csv_path = Path(csv_path)
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_bytes(self.to_csv().encode("utf-8"))
        csv_path.with_suffix(".json").write_text(
            self.metadata.model_dump_json(indent=2), encoding="utf-8"
        )
        self.to_frame(timing=True).to_csv(
            timing_path(csv_path), index=False, lineterminator="\r\n", float_format="%.3f"
        )
        return csv_path


def timing_path(csv_path: Path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(f"{csv_path.stem}_timing.csv")


def read_episode_log(csv_path: Path) -> EpisodeLog:
    """Load an episode written by ``EpisodeLog.write``; timings are optional."""
    csv_path = Path(csv_path)
    sidecar = csv_path.with_suffix(".json")
    if not sidecar.is_file():
        raise TapReconError(f"episode metadata {sidecar} is missing")
    metadata = EpisodeMetadata.model_validate_json(sidecar.read_text(encoding="utf-8"))

    frame = pd.read_csv(csv_path)
    missing = set(RECORD_COLUMNS) - set(frame.columns)
    if missing:
        raise TapReconError(f"{csv_path} lacks columns {sorted(missing)}")

    timings = timing_path(csv_path)
    if timings.is_file():
        frame = frame.merge(pd.read_csv(timings), on="t", how="left")

    records = [TapRecord.model_validate(row) for row in frame.to_dict(orient="records")]
    return EpisodeLog(metadata, records)
