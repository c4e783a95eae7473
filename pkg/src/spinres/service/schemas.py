"""Request and response bodies for the HTTP service.

Responses carry plain floats serialized losslessly, so a thin client can
reconstruct every artifact file byte for byte without touching the physics.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..config import RunConfig


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: RunConfig = Field(default_factory=RunConfig)


class WeightsPayload(BaseModel):
    """Readout weights in the on-disk weights-file layout."""

    kind: Literal["linear-readout"] = "linear-readout"
    w: list[float]
    threshold: float
    lam: float
    bits: Optional[int] = None
    scale: Optional[float] = None


class RunResponse(BaseModel):
    run_hash: str
    train_accuracy: float
    test_accuracy: float
    quantized_train_accuracy: Optional[float] = None
    quantized_test_accuracy: Optional[float] = None
    elapsed_seconds: float
    weights: WeightsPayload
    quantized_weights: Optional[WeightsPayload] = None
    report: dict[str, Any]      # full report payload: config echo, samples
    labels: list[int]           # per sample, washout excluded
    states: list[list[float]]   # one row per sample, readout features in order


class TraceRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: RunConfig = Field(default_factory=RunConfig)
    indices: list[int] = []     # magnets to trace; empty means all
    stride: int = 100           # integration steps between trace rows


class TraceResponse(BaseModel):
    run_hash: str
    indices: list[int]
    times_ns: list[float]
    m_z: list[list[float]]      # one row per frame, one column per index


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: RunConfig = Field(default_factory=RunConfig)
    # field name -> values; "material.<param>" keys override the material.
    # Points are the cartesian product in the given key/value order.
    grid: dict[str, list[Any]]
    workers: int = 1


class SweepRow(BaseModel):
    point: dict[str, Any]
    status: Literal["ok", "failed"]
    run_hash: Optional[str] = None
    train_accuracy: Optional[float] = None
    test_accuracy: Optional[float] = None
    quantized_train_accuracy: Optional[float] = None
    quantized_test_accuracy: Optional[float] = None
    coupling_ratio: Optional[float] = None
    elapsed_seconds: Optional[float] = None
    error: Optional[str] = None


class SweepResponse(BaseModel):
    rows: list[SweepRow]


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str


class ErrorBody(BaseModel):
    """Failure diagnostic naming the pipeline stage that broke."""

    stage: Literal["config", "layout", "dynamics", "learning"]
    detail: str
