"""Macrospin dynamics of the coupled array.

Damped precession of each magnet's unit moment under its anisotropy and the
dipolar fields of all other magnets:

    dm/dt = -gamma*mu0/(1 + alpha^2) * (m x H + alpha * m x (m x H))

Input magnets can be clamped to +z or -z; a clamped magnet is frozen exactly
at its pole and receives no field, but still sources dipolar field. Time
integration is classical RK4 at a fixed step with per-step renormalization,
run inside a compiled kernel with explicit loops in a fixed order so repeated
runs are bit-identical. A plain numpy evaluation of the same right-hand side
is exposed for cross-checking the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from numba import njit

from .magnets import MU0, ArrayLayout, CouplingTensor, MaterialParams, SimConfig, _readonly


@dataclass(frozen=True)
class SpinState:
    """Unit moments of every magnet at one instant."""

    m: np.ndarray  # (N, 3)
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "m", _readonly(np.asarray(self.m, dtype=np.float64).reshape(-1, 3)))

    @property
    def n_magnets(self) -> int:
        return self.m.shape[0]


class ClampSet:
    """Which magnets are frozen, and at which pole.

    signs[i] is +1 (held at +z), -1 (held at -z) or 0 (free to move).
    """

    def __init__(self, signs: np.ndarray):
        signs = np.asarray(signs, dtype=np.int8).reshape(-1)
        if not np.all(np.isin(signs, (-1, 0, 1))):
            raise ValueError("clamp signs must be -1, 0 or +1")
        signs.setflags(write=False)
        self.signs = signs

    @classmethod
    def none(cls, n: int) -> "ClampSet":
        return cls(np.zeros(n, dtype=np.int8))

    @classmethod
    def of(cls, n: int, mapping: dict[int, int]) -> "ClampSet":
        signs = np.zeros(n, dtype=np.int8)
        for idx, sign in mapping.items():
            if not 0 <= idx < n:
                raise ValueError(f"clamp index {idx} out of range for {n} magnets")
            if sign not in (-1, 1):
                raise ValueError(f"clamp sign must be +-1, got {sign}")
            signs[idx] = sign
        return cls(signs)

    @property
    def free_mask(self) -> np.ndarray:
        return self.signs == 0

    def apply(self, m: np.ndarray) -> np.ndarray:
        """Return m with every clamped magnet pinned exactly at its pole."""
        out = np.array(m, dtype=np.float64)
        held = self.signs != 0
        out[held] = 0.0
        out[held, 2] = self.signs[held]
        return out


@dataclass(frozen=True)
class Trace:
    """Recorded trajectory: times (s) and unit moments per magnet."""

    times: np.ndarray  # (T,)
    m: np.ndarray      # (T, N, 3)

    def __post_init__(self):
        object.__setattr__(self, "times", _readonly(np.asarray(self.times, dtype=np.float64).reshape(-1)))
        object.__setattr__(self, "m", _readonly(self.m))

    @property
    def m_z(self) -> np.ndarray:
        return self.m[:, :, 2]


@dataclass(frozen=True)
class RunResult:
    """Final state of an integration run plus optional recording."""

    state: SpinState
    trace: Trace | None
    max_norm_drift: float  # worst pre-renormalization |norm - 1| per step


# ---------------------------------------------------------------------------
# Right-hand side, plain numpy route
# ---------------------------------------------------------------------------

def effective_field(state: SpinState, coupling: CouplingTensor, params: MaterialParams,
                    clamps: ClampSet | None = None,
                    axes: np.ndarray | None = None) -> np.ndarray:
    """Per-magnet field (A/m): uniaxial anisotropy plus all dipolar terms.

    Rows of clamped magnets are zero; their motion is suppressed entirely
    rather than fought by a large pinning field.
    """
    m = state.m
    n = m.shape[0]
    if axes is None:
        axes = np.zeros((n, 3))
        axes[:, 2] = 1.0
    proj = np.sum(m * axes, axis=1)
    h = params.anisotropy_field * proj[:, None] * axes
    h += np.einsum("ijkl,jl->ik", coupling.field_kernels(), m)
    if clamps is not None:
        h[~clamps.free_mask] = 0.0
    return h


def llg_derivative(m: np.ndarray, h: np.ndarray, params: MaterialParams) -> np.ndarray:
    """dm/dt (1/s) for unit moments m under fields h (A/m)."""
    pref = params.gamma * MU0 / (1.0 + params.alpha ** 2)
    mxh = np.cross(m, h)
    return -pref * (mxh + params.alpha * np.cross(m, mxh))


# ---------------------------------------------------------------------------
# Compiled kernel: RK4 with explicit loops, fixed summation order
# ---------------------------------------------------------------------------

@njit(cache=True)
def _deriv_kernel(m, axes, kernels, hk, free, pref, alpha, noise, out):
    n = m.shape[0]
    for i in range(n):
        if free[i] == 0:
            out[i, 0] = 0.0
            out[i, 1] = 0.0
            out[i, 2] = 0.0
            continue
        proj = m[i, 0] * axes[i, 0] + m[i, 1] * axes[i, 1] + m[i, 2] * axes[i, 2]
        hx = hk * proj * axes[i, 0] + noise[i, 0]
        hy = hk * proj * axes[i, 1] + noise[i, 1]
        hz = hk * proj * axes[i, 2] + noise[i, 2]
        for j in range(n):
            if j == i:
                continue
            hx += kernels[i, j, 0, 0] * m[j, 0] + kernels[i, j, 0, 1] * m[j, 1] + kernels[i, j, 0, 2] * m[j, 2]
            hy += kernels[i, j, 1, 0] * m[j, 0] + kernels[i, j, 1, 1] * m[j, 1] + kernels[i, j, 1, 2] * m[j, 2]
            hz += kernels[i, j, 2, 0] * m[j, 0] + kernels[i, j, 2, 1] * m[j, 1] + kernels[i, j, 2, 2] * m[j, 2]
        cx = m[i, 1] * hz - m[i, 2] * hy
        cy = m[i, 2] * hx - m[i, 0] * hz
        cz = m[i, 0] * hy - m[i, 1] * hx
        ccx = m[i, 1] * cz - m[i, 2] * cy
        ccy = m[i, 2] * cx - m[i, 0] * cz
        ccz = m[i, 0] * cy - m[i, 1] * cx
        out[i, 0] = -pref * (cx + alpha * ccx)
        out[i, 1] = -pref * (cy + alpha * ccy)
        out[i, 2] = -pref * (cz + alpha * ccz)


@njit(cache=True)
def _rk4_kernel(m, axes, kernels, hk, free, pref, alpha, dt, n_steps,
                record_every, rec, thermal_std, seed):
    n = m.shape[0]
    k1 = np.empty((n, 3))
    k2 = np.empty((n, 3))
    k3 = np.empty((n, 3))
    k4 = np.empty((n, 3))
    tmp = np.empty((n, 3))
    noise = np.zeros((n, 3))
    if thermal_std > 0.0:
        np.random.seed(seed)
    max_drift = 0.0
    rec_row = 0
    for step_idx in range(n_steps):
        if thermal_std > 0.0:
            for i in range(n):
                if free[i] == 0:
                    continue
                noise[i, 0] = thermal_std * np.random.normal(0.0, 1.0)
                noise[i, 1] = thermal_std * np.random.normal(0.0, 1.0)
                noise[i, 2] = thermal_std * np.random.normal(0.0, 1.0)
        _deriv_kernel(m, axes, kernels, hk, free, pref, alpha, noise, k1)
        for i in range(n):
            for c in range(3):
                tmp[i, c] = m[i, c] + 0.5 * dt * k1[i, c]
        _deriv_kernel(tmp, axes, kernels, hk, free, pref, alpha, noise, k2)
        for i in range(n):
            for c in range(3):
                tmp[i, c] = m[i, c] + 0.5 * dt * k2[i, c]
        _deriv_kernel(tmp, axes, kernels, hk, free, pref, alpha, noise, k3)
        for i in range(n):
            for c in range(3):
                tmp[i, c] = m[i, c] + dt * k3[i, c]
        _deriv_kernel(tmp, axes, kernels, hk, free, pref, alpha, noise, k4)
        for i in range(n):
            if free[i] == 0:
                continue
            for c in range(3):
                m[i, c] += dt / 6.0 * (k1[i, c] + 2.0 * k2[i, c] + 2.0 * k3[i, c] + k4[i, c])
            norm = np.sqrt(m[i, 0] ** 2 + m[i, 1] ** 2 + m[i, 2] ** 2)
            drift = abs(norm - 1.0)
            if drift > max_drift:
                max_drift = drift
            m[i, 0] /= norm
            m[i, 1] /= norm
            m[i, 2] /= norm
        if record_every > 0 and (step_idx + 1) % record_every == 0:
            for i in range(n):
                for c in range(3):
                    rec[rec_row, i, c] = m[i, c]
            rec_row += 1
    return max_drift


def _default_axes(n: int) -> np.ndarray:
    axes = np.zeros((n, 3))
    axes[:, 2] = 1.0
    return axes


def run_interval(state: SpinState, coupling: CouplingTensor, params: MaterialParams,
                 clamps: ClampSet, n_steps: int, dt: float,
                 axes: np.ndarray | None = None, record_every: int = 0,
                 thermal_std: float = 0.0, seed: int = 0) -> RunResult:
    """Integrate n_steps of fixed-step RK4 inside the compiled kernel.

    Clamped magnets are pinned to their pole before the first step and stay
    there exactly. With record_every = k > 0, the returned trace holds the
    state after every k-th step, preceded by the (pinned) initial state.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    n = state.n_magnets
    axes = _default_axes(n) if axes is None else np.asarray(axes, dtype=np.float64)
    m = clamps.apply(state.m)
    free = clamps.free_mask.astype(np.uint8)
    pref = params.gamma * MU0 / (1.0 + params.alpha ** 2)
    n_rec = n_steps // record_every if record_every > 0 else 0
    rec = np.empty((n_rec, n, 3))
    drift = _rk4_kernel(m, np.ascontiguousarray(axes),
                        np.ascontiguousarray(coupling.field_kernels()),
                        params.anisotropy_field, free, pref, params.alpha,
                        dt, n_steps, record_every, rec, thermal_std, seed)
    final = SpinState(m=m, t=state.t + n_steps * dt)
    trace = None
    if record_every > 0:
        times = state.t + dt * record_every * np.arange(1, n_rec + 1)
        times = np.concatenate([[state.t], times])
        frames = np.concatenate([clamps.apply(state.m)[None], rec])
        trace = Trace(times=times, m=frames)
    return RunResult(state=final, trace=trace, max_norm_drift=float(drift))


def step(state: SpinState, coupling: CouplingTensor, params: MaterialParams,
         clamps: ClampSet, dt: float, axes: np.ndarray | None = None) -> SpinState:
    """One RK4 step (with renormalization) through the compiled kernel."""
    return run_interval(state, coupling, params, clamps, 1, dt, axes=axes).state


# ---------------------------------------------------------------------------
# Energy and coupling calibration
# ---------------------------------------------------------------------------

def total_energy(state: SpinState, coupling: CouplingTensor, params: MaterialParams,
                 axes: np.ndarray | None = None) -> float:
    """Magnetic energy (J): E = -mu0 * sum_i (ms*V/2) * m_i . H_i.

    H_i here is the raw anisotropy-plus-dipolar field on every magnet,
    including clamped ones (the pair sum needs both sides, and the factor
    1/2 undoes the double counting). Under damped motion with static clamps
    this never increases.
    """
    h = effective_field(state, coupling, params, clamps=None, axes=axes)
    return float(-MU0 * params.moment / 2.0 * np.sum(state.m * h))


def max_aligned_dipolar_field(layout: ArrayLayout, coupling: CouplingTensor) -> float:
    """Largest |dipolar field| (A/m) on any magnet with all moments at +z."""
    n = layout.n_magnets
    mz = np.zeros((n, 3))
    mz[:, 2] = 1.0
    h = np.einsum("ijkl,jl->ik", coupling.field_kernels(), mz)
    return float(np.linalg.norm(h, axis=1).max())


def coupling_ratio(layout: ArrayLayout, coupling: CouplingTensor,
                   params: MaterialParams) -> float:
    """Peak dipolar field over anisotropy field H_k; the switching margin."""
    return max_aligned_dipolar_field(layout, coupling) / params.anisotropy_field


def calibrate_anisotropy(layout: ArrayLayout, params: MaterialParams,
                         ratio: float = 1.0) -> MaterialParams:
    """Return params with ku set so peak dipolar field = ratio * H_k.

    Dipolar coupling must be able to compete with the anisotropy barrier
    (ratio within roughly [0.3, 3]) or the array ignores its inputs.
    """
    from .magnets import build_coupling_tensors
    from dataclasses import replace
    if ratio <= 0:
        raise ValueError("ratio must be > 0")
    coupling = build_coupling_tensors(layout, params)
    h_peak = max_aligned_dipolar_field(layout, coupling)
    hk = h_peak / ratio
    return replace(params, ku=hk * MU0 * params.ms / 2.0)


# ---------------------------------------------------------------------------
# Trace CSV: t_ns, m_z_00 ... m_z_NN, lossless floats
# ---------------------------------------------------------------------------

def trace_csv_text(times_ns: np.ndarray, m_z: np.ndarray,
                   indices: Sequence[int] | None = None) -> str:
    """Render trace columns as CSV text.

    m_z is (T, n_columns); indices are the magnet numbers the columns refer
    to (used to name them), defaulting to 0..n_columns-1.
    """
    m_z = np.asarray(m_z)
    if indices is None:
        indices = range(m_z.shape[1])
    elif len(indices) != m_z.shape[1]:
        raise ValueError("one index per m_z column required")
    lines = ["t_ns," + ",".join(f"m_z_{i:02d}" for i in indices)]
    for row in range(m_z.shape[0]):
        vals = [repr(float(times_ns[row]))] + [repr(float(v)) for v in m_z[row]]
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def save_trace_csv(trace: Trace, path: str | Path,
                   indices: Sequence[int] | None = None) -> None:
    """Write trace m_z columns, optionally restricted to selected magnets."""
    m_z = trace.m[:, :, 2]
    if indices is not None:
        m_z = m_z[:, list(indices)]
    Path(path).write_text(trace_csv_text(trace.times * 1e9, m_z, indices))


def load_trace_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read a trace CSV, returning (times_ns, m_z) with m_z shaped (T, N).

    Times stay in the file's unit (ns) so the round trip is lossless.
    """
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("t_ns,"):
        raise ValueError("not a trace CSV: missing t_ns header")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return data[:, 0], data[:, 1:]


# ---------------------------------------------------------------------------
# Convenience wrapper used by the task runner and the service
# ---------------------------------------------------------------------------

class Simulator:
    """Bundle of layout, material, coupling and timing for repeated runs."""

    def __init__(self, layout: ArrayLayout, params: MaterialParams, config: SimConfig):
        from .magnets import build_coupling_tensors, validate_layout
        validate_layout(layout, params).raise_if_invalid()
        self.layout = layout
        self.params = params
        self.config = config
        self.coupling = build_coupling_tensors(layout, params)

    def initial_state(self) -> SpinState:
        """Every moment at the +z side of its own easy axis."""
        return SpinState(m=self.layout.axes.copy(), t=0.0)

    def clamps_for_bits(self, bits: tuple[int, ...]) -> ClampSet:
        """Clamp the input magnets: bit 1 holds +z, bit 0 holds -z."""
        if len(bits) != len(self.layout.input_indices):
            raise ValueError(f"need {len(self.layout.input_indices)} bits, got {len(bits)}")
        mapping = {idx: (1 if b else -1)
                   for idx, b in zip(self.layout.input_indices, bits)}
        return ClampSet.of(self.layout.n_magnets, mapping)

    def run(self, state: SpinState, clamps: ClampSet, n_steps: int,
            record_every: int = 0) -> RunResult:
        thermal = self.config.thermal_field if self.config.thermal_enabled else 0.0
        return run_interval(state, self.coupling, self.params, clamps,
                            n_steps, self.config.dt, axes=self.layout.axes,
                            record_every=record_every, thermal_std=thermal,
                            seed=self.config.rng_seed)

    def hold_sample(self, state: SpinState, bits: tuple[int, ...],
                    record_every: int = 0) -> RunResult:
        """Apply one input symbol for a full sample period."""
        return self.run(state, self.clamps_for_bits(bits),
                        self.config.steps_per_sample, record_every=record_every)

    def sample(self, state: SpinState) -> np.ndarray:
        """Reservoir state vector: m_z of the readout magnets, in order."""
        return state.m[list(self.layout.readout_indices), 2].copy()

    def energy(self, state: SpinState) -> float:
        return total_energy(state, self.coupling, self.params, axes=self.layout.axes)
