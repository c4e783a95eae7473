"""Run configuration: one validated object describing a full experiment.

Serialized as JSON; the canonical serialization (sorted keys) is hashed to a
short run identifier that ties every artifact of a run (states CSV, weights,
report) back to the exact configuration that produced it.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class RunConfig(BaseModel):
    """Everything needed to reproduce one benchmark run."""

    model_config = ConfigDict(extra="forbid")

    reservoir: Literal["nanomagnet", "esn"] = "nanomagnet"
    n_waves: int = 25
    train_waves: int = 20
    washout_waves: int = 2
    seed: int = 0
    lam: float = 3e-4
    threshold: float = 0.5
    quantize_bits: Optional[int] = None
    esn_nodes: int = 20
    esn_spectral_radius: float = 0.9
    esn_input_scaling: float = 1.0
    dt: float = 1e-12
    sample_period: float = 3e-9
    thermal_enabled: bool = False
    thermal_field: float = 0.0
    layout_file: Optional[str] = None
    material_file: Optional[str] = None

    @field_validator("n_waves", "esn_nodes")
    @classmethod
    def _positive(cls, v, info):
        if v < 1:
            raise ValueError(f"{info.field_name} must be >= 1, got {v}")
        return v

    @field_validator("washout_waves")
    @classmethod
    def _nonneg(cls, v):
        if v < 0:
            raise ValueError(f"washout_waves must be >= 0, got {v}")
        return v

    @field_validator("lam")
    @classmethod
    def _lam_nonneg(cls, v):
        if v < 0:
            raise ValueError(f"lam must be >= 0, got {v}")
        return v

    @field_validator("esn_spectral_radius")
    @classmethod
    def _rho_positive(cls, v):
        if v <= 0:
            raise ValueError(f"esn_spectral_radius must be > 0, got {v}")
        return v

    @field_validator("quantize_bits")
    @classmethod
    def _bits_range(cls, v):
        if v is not None and not 2 <= v <= 16:
            raise ValueError(f"quantize_bits must be in [2, 16], got {v}")
        return v

    @model_validator(mode="after")
    def _cross_checks(self):
        if not 0 < self.train_waves < self.n_waves:
            raise ValueError(
                f"need 0 < train_waves < n_waves, got {self.train_waves}/{self.n_waves}")
        if not 0 < self.dt <= self.sample_period:
            raise ValueError("need 0 < dt <= sample_period")
        ratio = self.sample_period / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * ratio:
            raise ValueError("sample_period must be an integer multiple of dt")
        if self.thermal_field < 0:
            raise ValueError("thermal_field must be >= 0")
        return self


def canonical_json(config: RunConfig) -> str:
    return json.dumps(config.model_dump(), sort_keys=True, separators=(",", ":"))


def run_hash(config: RunConfig) -> str:
    """16-hex-char digest of the canonical configuration."""
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()[:16]


def save_config(config: RunConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config.model_dump(), indent=2, sort_keys=True) + "\n")


def load_config(path: str | Path) -> RunConfig:
    return RunConfig.model_validate(json.loads(Path(path).read_text()))
