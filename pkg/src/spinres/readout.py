"""Trainable readout for reservoir state vectors.

Ridge regression in the form W = Y X^T (X X^T + lam I)^(-1), computed by a
Cholesky solve of the symmetric positive (semi)definite normal matrix rather
than an explicit inverse. A scalar threshold on the regression output turns
it into a binary classifier. Also provides symmetric uniform weight
quantization and a small echo state network used as a software reference
reservoir for the same pipeline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .magnets import _readonly


def ridge_regression(x: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    """Solve W = Y X^T (X X^T + lam I)^(-1) for features-by-samples X.

    x: (n_features, n_samples), y: (n_outputs, n_samples) or (n_samples,).
    Returns W with shape (n_outputs, n_features) (or (n_features,) for 1-D y).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"x must be 2-D (features, samples), got shape {x.shape}")
    squeeze = y.ndim == 1
    y2 = y.reshape(1, -1) if squeeze else y
    if y2.ndim != 2 or y2.shape[1] != x.shape[1]:
        raise ValueError(f"y samples {y2.shape} do not match x samples {x.shape}")
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    gram = x @ x.T + lam * np.eye(x.shape[0])
    # gram is SPD for lam > 0 (and almost surely for generic x at lam = 0);
    # solve gram @ W^T = X Y^T instead of inverting
    try:
        w = cho_solve(cho_factor(gram), x @ y2.T).T
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"normal matrix not positive definite (lam={lam}); "
            "rank-deficient states need lam > 0") from exc
    return w[0] if squeeze else w


def add_bias(x: np.ndarray) -> np.ndarray:
    """Append a constant-1 feature row to a (features, samples) matrix."""
    x = np.asarray(x, dtype=np.float64)
    return np.vstack([x, np.ones((1, x.shape[1]))])


@dataclass(frozen=True)
class ReadoutModel:
    """Linear readout w (last entry is the bias weight) plus a threshold."""

    w: np.ndarray          # (n_features + 1,)
    threshold: float = 0.5
    lam: float = 3e-4
    bits: int | None = None   # set when the weights are quantized
    scale: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "w", _readonly(np.asarray(self.w, dtype=np.float64).reshape(-1)))

    def predict(self, x: np.ndarray) -> np.ndarray:
        """Regression outputs for a (features, samples) state matrix."""
        xb = add_bias(x)
        if xb.shape[0] != self.w.shape[0]:
            raise ValueError(f"model expects {self.w.shape[0] - 1} features, "
                             f"got {xb.shape[0] - 1}")
        return self.w @ xb

    def classify(self, x: np.ndarray) -> np.ndarray:
        """1 where the output reaches the threshold, else 0 (ties go to 1)."""
        return (self.predict(x) >= self.threshold).astype(np.int64)


def train_readout(x: np.ndarray, labels: np.ndarray, lam: float = 3e-4,
                  threshold: float = 0.5) -> ReadoutModel:
    """Fit the linear readout on states x (features, samples) and 0/1 labels."""
    w = ridge_regression(add_bias(x), np.asarray(labels, dtype=np.float64), lam)
    return ReadoutModel(w=w, threshold=threshold, lam=lam)


def accuracy(predicted: np.ndarray, labels: np.ndarray) -> float:
    predicted = np.asarray(predicted)
    labels = np.asarray(labels)
    if predicted.shape != labels.shape:
        raise ValueError("prediction/label shape mismatch")
    if predicted.size == 0:
        raise ValueError("no samples")
    return float(np.mean(predicted == labels))


# ---------------------------------------------------------------------------
# Weight quantization
# ---------------------------------------------------------------------------

def quantize_weights(w: np.ndarray, bits: int) -> tuple[np.ndarray, float]:
    """Symmetric uniform quantization to 2^bits - 1 levels.

    Levels are integer multiples of scale = max|w| / (2^(bits-1) - 1), so the
    worst-case rounding error is scale / 2 = max|w| / (2^bits - 2).
    Returns (quantized weights, scale); all-zero weights give scale 0.
    """
    if not 2 <= bits <= 16:
        raise ValueError(f"bits must be in [2, 16], got {bits}")
    w = np.asarray(w, dtype=np.float64)
    peak = float(np.abs(w).max()) if w.size else 0.0
    scale = peak / (2 ** (bits - 1) - 1)
    if scale == 0.0:   # all-zero weights, or peak below float resolution
        return np.zeros_like(w), 0.0
    return np.round(w / scale) * scale, scale


def quantize_model(model: ReadoutModel, bits: int) -> ReadoutModel:
    wq, scale = quantize_weights(model.w, bits)
    return replace(model, w=wq, bits=bits, scale=scale)


# ---------------------------------------------------------------------------
# Echo state network reference reservoir
# ---------------------------------------------------------------------------

def esn_init(n_inputs: int, n_nodes: int, spectral_radius: float,
             seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded uniform [-1, 1] input and recurrent matrices.

    The recurrent matrix is rescaled so its spectral radius equals the
    requested value (to ~1e-12 relative).
    """
    if n_inputs < 1 or n_nodes < 1:
        raise ValueError("n_inputs and n_nodes must be >= 1")
    if spectral_radius <= 0:
        raise ValueError(f"spectral_radius must be > 0, got {spectral_radius}")
    rng = np.random.default_rng(seed)
    w_in = rng.uniform(-1.0, 1.0, size=(n_nodes, n_inputs))
    w_res = rng.uniform(-1.0, 1.0, size=(n_nodes, n_nodes))
    rho = float(np.abs(np.linalg.eigvals(w_res)).max())
    w_res *= spectral_radius / rho
    return w_in, w_res


def esn_states(w_in: np.ndarray, w_res: np.ndarray, inputs: np.ndarray) -> np.ndarray:
    """Run x_k = tanh(W_in u_k + W_res x_{k-1}) from x = 0.

    inputs: (n_inputs, n_steps). Returns states (n_nodes, n_steps), where
    column k is the state after consuming input k.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[0] != w_in.shape[1]:
        raise ValueError(f"inputs must be ({w_in.shape[1]}, n_steps), got {inputs.shape}")
    n_nodes, n_steps = w_in.shape[0], inputs.shape[1]
    states = np.empty((n_nodes, n_steps))
    x = np.zeros(n_nodes)
    for k in range(n_steps):
        x = np.tanh(w_in @ inputs[:, k] + w_res @ x)
        states[:, k] = x
    return states


# ---------------------------------------------------------------------------
# Weights file: JSON, lossless floats
# ---------------------------------------------------------------------------

def save_weights(model: ReadoutModel, path: str | Path) -> None:
    payload = {
        "kind": "linear-readout",
        "w": [float(v) for v in model.w],
        "threshold": model.threshold,
        "lam": model.lam,
        "bits": model.bits,
        "scale": model.scale,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_weights(path: str | Path) -> ReadoutModel:
    payload = json.loads(Path(path).read_text())
    if payload.get("kind") != "linear-readout":
        raise ValueError(f"not a readout weights file: {path}")
    return ReadoutModel(w=np.array(payload["w"], dtype=np.float64),
                        threshold=float(payload["threshold"]),
                        lam=float(payload["lam"]),
                        bits=payload["bits"],
                        scale=payload["scale"])
