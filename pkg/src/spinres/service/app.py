"""HTTP service wrapping the benchmark pipeline.

POST /run executes one experiment and returns everything a client needs to
write the artifact files; POST /trace records a dense m_z trajectory of the
benchmark input stream; POST /sweep evaluates a parameter grid point by
point. Failures carry a diagnostic naming the stage that broke (config,
layout, dynamics, or learning).
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from itertools import product
from typing import Any

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from .. import __version__
from ..config import RunConfig, canonical_json, run_hash
from ..dynamics import coupling_ratio
from ..magnets import LayoutError, build_coupling_tensors
from ..readout import ReadoutModel
from ..task import (
    ExperimentResult,
    report_payload,
    resolve_layout_params,
    run_experiment,
    trace_benchmark,
)
from .schemas import (
    ErrorBody,
    HealthResponse,
    RunRequest,
    RunResponse,
    SweepRequest,
    SweepResponse,
    SweepRow,
    TraceRequest,
    TraceResponse,
    WeightsPayload,
)

app = FastAPI(
    title="nanomagnet reservoir service",
    description="Waveform-identification benchmark on a dipole-coupled "
                "nanomagnet array or a reference echo state network.",
    version=__version__,
)


def _stage_of(exc: Exception) -> str:
    """Name the pipeline stage an exception belongs to."""
    if isinstance(exc, LayoutError):
        return "layout"
    if isinstance(exc, np.linalg.LinAlgError):
        return "learning"
    if isinstance(exc, (ValidationError, ValueError, TypeError, KeyError, OSError)):
        return "config"
    return "dynamics"


def _error_response(exc: Exception) -> JSONResponse:
    stage = _stage_of(exc)
    body = ErrorBody(stage=stage, detail=str(exc))
    return JSONResponse(status_code=500 if stage == "dynamics" else 400,
                        content=body.model_dump())


def _weights_payload(model: ReadoutModel) -> WeightsPayload:
    return WeightsPayload(w=[float(v) for v in model.w],
                          threshold=model.threshold, lam=model.lam,
                          bits=model.bits, scale=model.scale)


def _run_response(result: ExperimentResult) -> RunResponse:
    quantized = (None if result.quantized_model is None
                 else _weights_payload(result.quantized_model))
    return RunResponse(
        run_hash=result.run_hash,
        train_accuracy=result.train_accuracy,
        test_accuracy=result.test_accuracy,
        quantized_train_accuracy=result.quantized_train_accuracy,
        quantized_test_accuracy=result.quantized_test_accuracy,
        elapsed_seconds=result.elapsed_seconds,
        weights=_weights_payload(result.model),
        quantized_weights=quantized,
        report=report_payload(result),
        labels=[int(v) for v in result.labels],
        states=result.states.T.tolist(),
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/run", response_model=RunResponse,
          responses={400: {"model": ErrorBody}, 500: {"model": ErrorBody}})
def post_run(req: RunRequest):
    try:
        result = run_experiment(req.config)
    except Exception as exc:
        return _error_response(exc)
    return _run_response(result)


@app.post("/trace", response_model=TraceResponse,
          responses={400: {"model": ErrorBody}, 500: {"model": ErrorBody}})
def post_trace(req: TraceRequest):
    try:
        layout, _ = resolve_layout_params(req.config)
        n = layout.n_magnets
        indices = list(req.indices) if req.indices else list(range(n))
        bad = [i for i in indices if not 0 <= i < n]
        if bad:
            raise ValueError(f"magnet indices out of range for {n} magnets: {bad}")
        times_ns, m_z = trace_benchmark(req.config, req.stride)
    except Exception as exc:
        return _error_response(exc)
    return TraceResponse(run_hash=run_hash(req.config), indices=indices,
                         times_ns=times_ns.tolist(),
                         m_z=m_z[:, indices].tolist())


# ---------------------------------------------------------------------------
# Parameter sweep
# ---------------------------------------------------------------------------

def expand_grid(grid: dict[str, list[Any]]) -> list[dict[str, Any]]:
    """Cartesian product of the grid in key order; deterministic."""
    if not grid:
        raise ValueError("grid must not be empty")
    for key, values in grid.items():
        if not values:
            raise ValueError(f"grid entry {key!r} has no values")
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in product(*grid.values())]


def _split_point(point: dict[str, Any]) -> tuple[dict[str, Any], dict[str, Any]]:
    cfg_fields, mat_fields = {}, {}
    for key, val in point.items():
        target = mat_fields if key.startswith("material.") else cfg_fields
        target[key.removeprefix("material.")] = val
    return cfg_fields, mat_fields


def _point_hash(cfg: RunConfig, mat_fields: dict[str, Any]) -> str:
    """Run hash extended with material overrides when a point has them."""
    if not mat_fields:
        return run_hash(cfg)
    text = canonical_json(cfg) + json.dumps(mat_fields, sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _sweep_point(base: RunConfig, point: dict[str, Any]) -> SweepRow:
    try:
        cfg_fields, mat_fields = _split_point(point)
        cfg = RunConfig(**{**base.model_dump(), **cfg_fields})
        layout = params = ratio = None
        if cfg.reservoir == "nanomagnet":
            layout, params = resolve_layout_params(cfg)
            if mat_fields:
                params = replace(params, **mat_fields)
            ratio = coupling_ratio(layout, build_coupling_tensors(layout, params),
                                   params)
        elif mat_fields:
            raise ValueError("material overrides apply only to the nanomagnet "
                             f"reservoir: {sorted(mat_fields)}")
        result = run_experiment(cfg, layout=layout, params=params)
    except Exception as exc:
        return SweepRow(point=point, status="failed",
                        error=f"{_stage_of(exc)}: {exc}")
    return SweepRow(
        point=point, status="ok", run_hash=_point_hash(cfg, mat_fields),
        train_accuracy=result.train_accuracy,
        test_accuracy=result.test_accuracy,
        quantized_train_accuracy=result.quantized_train_accuracy,
        quantized_test_accuracy=result.quantized_test_accuracy,
        coupling_ratio=ratio, elapsed_seconds=result.elapsed_seconds)


@app.post("/sweep", response_model=SweepResponse,
          responses={400: {"model": ErrorBody}, 500: {"model": ErrorBody}})
def post_sweep(req: SweepRequest):
    try:
        points = expand_grid(req.grid)
        if req.workers < 1:
            raise ValueError(f"workers must be >= 1, got {req.workers}")
    except Exception as exc:
        return _error_response(exc)
    if req.workers == 1:
        rows = [_sweep_point(req.config, p) for p in points]
    else:
        # rows come back in grid order regardless of completion order
        with ThreadPoolExecutor(max_workers=req.workers) as pool:
            futures = [pool.submit(_sweep_point, req.config, p) for p in points]
            rows = [f.result() for f in futures]
    return SweepResponse(rows=rows)
