"""Waveform identification benchmark.

A random stream of square and triangle waves, six samples per wave, is fed
to a reservoir two bits at a time; a linear readout trained on the recorded
reservoir states labels every sample with the wave it belongs to.

    square   -> values 3, 3, 3, 0, 0, 0      (label 1)
    triangle -> values 1, 2, 3, 2, 1, 0      (label 0)

Each value v in 0..3 becomes two clamp bits (v >> 1, v & 1). The reservoir
state is sampled at the end of each hold interval, immediately before the
next input is applied. Knowing only the current value caps accuracy at
10/12 (values 1 and 2 are triangle-only, 0 and 3 are split 3:1), so beating
that ceiling requires the reservoir to remember at least one step of input
history; one step is also sufficient, because the (previous, current) value
pairs of the two classes never overlap.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig, run_hash
from .dynamics import Simulator
from .magnets import (
    ArrayLayout,
    LayoutError,
    MaterialParams,
    SimConfig,
    default_layout,
    default_params,
    load_layout,
    load_material,
)
from .readout import (
    ReadoutModel,
    accuracy,
    esn_init,
    esn_states,
    quantize_model,
    train_readout,
)

WAVE_SQUARE = "square"
WAVE_TRIANGLE = "triangle"
WAVE_VALUES = {
    WAVE_SQUARE: (3, 3, 3, 0, 0, 0),
    WAVE_TRIANGLE: (1, 2, 3, 2, 1, 0),
}
WAVE_LABELS = {WAVE_SQUARE: 1, WAVE_TRIANGLE: 0}
WAVE_LEN = 6


def value_to_bits(value: int) -> tuple[int, int]:
    """Two clamp bits per value: (high, low), each driving one input magnet."""
    if not 0 <= value <= 3:
        raise ValueError(f"value must be in 0..3, got {value}")
    return (value >> 1) & 1, value & 1


def generate_wave_kinds(n_waves: int, seed: int) -> list[str]:
    """Seeded even coin flips between the two wave kinds."""
    rng = np.random.default_rng(seed)
    return [WAVE_SQUARE if b else WAVE_TRIANGLE
            for b in rng.integers(0, 2, size=n_waves)]


def build_sequence(kinds: list[str]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Concatenate waves into (values, labels, wave_index) sample arrays."""
    values, labels, wave_idx = [], [], []
    for w, kind in enumerate(kinds):
        for v in WAVE_VALUES[kind]:
            values.append(v)
            labels.append(WAVE_LABELS[kind])
            wave_idx.append(w)
    return np.array(values), np.array(labels), np.array(wave_idx)


def memoryless_ceiling() -> tuple[int, int]:
    """Best per-sample accuracy achievable from the current value alone.

    Counts, over one wave of each kind, the samples a value-to-class lookup
    can get right at equal class priors. Returns (correct, total).
    """
    correct = total = 0
    for v in range(4):
        in_square = WAVE_VALUES[WAVE_SQUARE].count(v)
        in_triangle = WAVE_VALUES[WAVE_TRIANGLE].count(v)
        correct += max(in_square, in_triangle)
        total += in_square + in_triangle
    return correct, total


# ---------------------------------------------------------------------------
# Reservoir drivers
# ---------------------------------------------------------------------------

def nanomagnet_states(values: np.ndarray, sim: Simulator) -> np.ndarray:
    """Feed the value stream to the magnet array; column k is the readout
    m_z vector sampled after holding value k for one full sample period."""
    states = np.empty((len(sim.layout.readout_indices), len(values)))
    state = sim.initial_state()
    for k, v in enumerate(values):
        state = sim.hold_sample(state, value_to_bits(int(v))).state
        states[:, k] = sim.sample(state)
    return states


def esn_reference_states(values: np.ndarray, n_nodes: int,
                         spectral_radius: float, seed: int,
                         input_scaling: float = 1.0) -> np.ndarray:
    """Same stream through the software reference reservoir.

    Bits map to +-1 drive channels plus a constant bias channel. Without the
    bias the tanh map is odd, so complementary values (0 and 3, 1 and 2)
    produce mirror-image states that a single affine readout cannot label
    independently; the bias channel breaks that symmetry the same way the
    easy-axis tilts break it for the magnet array.
    """
    u = np.array([[2 * b - 1 for b in value_to_bits(int(v))] + [1.0]
                  for v in values], dtype=np.float64).T
    w_in, w_res = esn_init(3, n_nodes, spectral_radius, seed)
    return esn_states(w_in * input_scaling, w_res, u)


def trace_benchmark(config: RunConfig, stride: int,
                    layout: ArrayLayout | None = None,
                    params: MaterialParams | None = None,
                    ) -> tuple[np.ndarray, np.ndarray]:
    """Run the benchmark input stream recording the dense m_z trajectory.

    Returns (times_ns, m_z) with m_z shaped (frames, n_magnets): one frame
    per stride integration steps, washout waves included. stride must
    divide the steps of one hold interval so every sampled state appears
    in the trace.
    """
    if config.reservoir != "nanomagnet":
        raise ValueError("traces exist only for the nanomagnet reservoir")
    file_layout, file_params = resolve_layout_params(config)
    layout = layout if layout is not None else file_layout
    params = params if params is not None else file_params
    sim_cfg = SimConfig(dt=config.dt, sample_period=config.sample_period,
                        rng_seed=config.seed,
                        thermal_enabled=config.thermal_enabled,
                        thermal_field=config.thermal_field)
    steps = sim_cfg.steps_per_sample
    if not 1 <= stride <= steps:
        raise ValueError(
            f"stride must be in [1, {steps}] (steps per hold), got {stride}")
    if steps % stride:
        raise ValueError(f"stride must divide {steps} steps per hold, got {stride}")

    sim = Simulator(layout, params, sim_cfg)
    kinds = generate_wave_kinds(config.washout_waves + config.n_waves, config.seed)
    values, _, _ = build_sequence(kinds)

    state = sim.initial_state()
    times, frames = [], []
    for k, v in enumerate(values):
        result = sim.hold_sample(state, value_to_bits(int(v)), record_every=stride)
        state = result.state
        skip = 0 if k == 0 else 1   # later holds repeat the previous frame
        times.append(result.trace.times[skip:])
        frames.append(result.trace.m[skip:, :, 2])
    return np.concatenate(times) * 1e9, np.concatenate(frames)


# ---------------------------------------------------------------------------
# Experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentResult:
    """Everything produced by one benchmark run."""

    config: RunConfig
    run_hash: str
    kinds: list[str]          # dataset waves, washout excluded
    values: np.ndarray        # (T,) input values
    labels: np.ndarray        # (T,) 0/1 truth
    wave_index: np.ndarray    # (T,) wave each sample belongs to
    states: np.ndarray        # (n_features, T)
    train_mask: np.ndarray    # (T,) bool
    model: ReadoutModel
    y_hat: np.ndarray         # (T,) regression outputs
    predictions: np.ndarray   # (T,) 0/1
    train_accuracy: float
    test_accuracy: float
    quantized_model: ReadoutModel | None
    quantized_y_hat: np.ndarray | None
    quantized_predictions: np.ndarray | None
    quantized_train_accuracy: float | None
    quantized_test_accuracy: float | None
    elapsed_seconds: float

    @property
    def n_samples(self) -> int:
        return len(self.values)


def resolve_layout_params(config: RunConfig) -> tuple[ArrayLayout, MaterialParams]:
    """Load the layout and material a config points at, or the defaults.

    Any problem with the layout file surfaces as LayoutError so callers can
    name the failing stage; material problems stay ValueError/OSError.
    """
    try:
        layout = load_layout(config.layout_file) if config.layout_file else default_layout()
    except LayoutError:
        raise
    except (OSError, ValueError) as exc:
        raise LayoutError(f"layout file {config.layout_file}: {exc}") from exc
    params = load_material(config.material_file) if config.material_file else default_params()
    return layout, params


def run_experiment(config: RunConfig, layout: ArrayLayout | None = None,
                   params: MaterialParams | None = None) -> ExperimentResult:
    """Run the full benchmark described by config and train its readout.

    layout and params override the files referenced by the config (used by
    parameter sweeps that build variants in memory).
    """
    t0 = time.perf_counter()
    kinds_all = generate_wave_kinds(config.washout_waves + config.n_waves, config.seed)
    values_all, labels_all, wave_all = build_sequence(kinds_all)

    if config.reservoir == "nanomagnet":
        file_layout, file_params = resolve_layout_params(config)
        layout = layout if layout is not None else file_layout
        params = params if params is not None else file_params
        sim_cfg = SimConfig(dt=config.dt, sample_period=config.sample_period,
                            rng_seed=config.seed,
                            thermal_enabled=config.thermal_enabled,
                            thermal_field=config.thermal_field)
        sim = Simulator(layout, params, sim_cfg)
        states_all = nanomagnet_states(values_all, sim)
    else:
        states_all = esn_reference_states(values_all, config.esn_nodes,
                                          config.esn_spectral_radius, config.seed,
                                          config.esn_input_scaling)

    start = config.washout_waves * WAVE_LEN
    states = states_all[:, start:]
    values = values_all[start:]
    labels = labels_all[start:]
    wave_index = wave_all[start:] - config.washout_waves
    kinds = kinds_all[config.washout_waves:]

    train_mask = wave_index < config.train_waves
    model = train_readout(states[:, train_mask], labels[train_mask],
                          lam=config.lam, threshold=config.threshold)
    y_hat = model.predict(states)
    predictions = model.classify(states)
    train_acc = accuracy(predictions[train_mask], labels[train_mask])
    test_acc = accuracy(predictions[~train_mask], labels[~train_mask])

    qmodel = qy = qpred = qtrain = qtest = None
    if config.quantize_bits is not None:
        qmodel = quantize_model(model, config.quantize_bits)
        qy = qmodel.predict(states)
        qpred = qmodel.classify(states)
        qtrain = accuracy(qpred[train_mask], labels[train_mask])
        qtest = accuracy(qpred[~train_mask], labels[~train_mask])

    return ExperimentResult(
        config=config, run_hash=run_hash(config), kinds=kinds, values=values,
        labels=labels, wave_index=wave_index, states=states,
        train_mask=train_mask, model=model, y_hat=y_hat,
        predictions=predictions, train_accuracy=train_acc,
        test_accuracy=test_acc, quantized_model=qmodel, quantized_y_hat=qy,
        quantized_predictions=qpred, quantized_train_accuracy=qtrain,
        quantized_test_accuracy=qtest,
        elapsed_seconds=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Artifacts: states CSV and report JSON
# ---------------------------------------------------------------------------

def states_csv_text(digest: str, labels: np.ndarray, states: np.ndarray) -> str:
    """Render a (features, samples) state matrix with truth labels as CSV.

    The first line carries the run hash of the producing configuration.
    """
    n_feat, n_samples = states.shape
    lines = [f"# run_hash={digest}"]
    lines.append("t_index,label," +
                 ",".join(f"x_{i:02d}" for i in range(n_feat)) + ",bias")
    for k in range(n_samples):
        cells = [str(k), str(int(labels[k]))]
        cells += [repr(float(v)) for v in states[:, k]]
        cells.append("1.0")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def save_states_csv(result: ExperimentResult, path: str | Path) -> None:
    Path(path).write_text(
        states_csv_text(result.run_hash, result.labels, result.states))


def load_states_csv(path: str | Path) -> tuple[str, np.ndarray, np.ndarray]:
    """Read back (run_hash, labels, states) from a states CSV."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# run_hash="):
        raise ValueError("not a states CSV: missing run_hash line")
    digest = lines[0].split("=", 1)[1].strip()
    if not lines[1].startswith("t_index,label,"):
        raise ValueError("not a states CSV: bad header")
    labels, rows = [], []
    for line in lines[2:]:
        cells = line.split(",")
        labels.append(int(cells[1]))
        rows.append([float(v) for v in cells[2:-1]])
    return digest, np.array(labels), np.array(rows).T


def report_payload(result: ExperimentResult) -> dict:
    """JSON-ready summary of one run."""
    samples = []
    for k in range(result.n_samples):
        a, b = value_to_bits(int(result.values[k]))
        entry = {
            "t": k,
            "value": int(result.values[k]),
            "bits": [a, b],
            "wave": int(result.wave_index[k]),
            "label": int(result.labels[k]),
            "y_hat": float(result.y_hat[k]),
            "prediction": int(result.predictions[k]),
            "split": "train" if result.train_mask[k] else "test",
        }
        if result.quantized_y_hat is not None:
            entry["y_hat_quantized"] = float(result.quantized_y_hat[k])
            entry["prediction_quantized"] = int(result.quantized_predictions[k])
        samples.append(entry)
    payload = {
        "run_hash": result.run_hash,
        "config": result.config.model_dump(),
        "train_accuracy": result.train_accuracy,
        "test_accuracy": result.test_accuracy,
        "weights": [float(v) for v in result.model.w],
        "threshold": result.model.threshold,
        "lam": result.model.lam,
        "quantized": None,
        "elapsed_seconds": result.elapsed_seconds,
        "samples": samples,
    }
    if result.quantized_model is not None:
        payload["quantized"] = {
            "bits": result.quantized_model.bits,
            "scale": result.quantized_model.scale,
            "weights": [float(v) for v in result.quantized_model.w],
            "train_accuracy": result.quantized_train_accuracy,
            "test_accuracy": result.quantized_test_accuracy,
        }
    return payload


def save_report_json(result: ExperimentResult, path: str | Path) -> None:
    import json
    Path(path).write_text(json.dumps(report_payload(result), indent=2,
                                     sort_keys=True) + "\n")
