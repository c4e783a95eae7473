"""Integrator tests: fields, torque, conservation, determinism, recording."""

import math

import numpy as np
import pytest

from spinres.magnets import (
    MU0,
    ArrayLayout,
    MaterialParams,
    SimConfig,
    build_coupling_tensors,
    default_layout,
    default_params,
)
from spinres.dynamics import (
    ClampSet,
    Simulator,
    SpinState,
    Trace,
    calibrate_anisotropy,
    coupling_ratio,
    effective_field,
    llg_derivative,
    load_trace_csv,
    run_interval,
    save_trace_csv,
    step,
    total_energy,
)


def pair_layout(spacing=100e-9):
    return ArrayLayout(positions=np.array([[0.0, 0.0], [spacing, 0.0]]),
                       input_indices=(0,), readout_indices=(1,))


def single_coupling(params):
    """Coupling for an isolated magnet: one zero 3x3 kernel."""
    from spinres.magnets import CouplingTensor
    return CouplingTensor(tensors=np.zeros((1, 1, 3, 3)), moment=params.moment)


def rk4_reference(m0, coupling, params, clamps, n_steps, dt, axes=None):
    """Independent RK4 built from the public numpy right-hand side."""
    m = clamps.apply(m0)
    free = clamps.free_mask

    def f(mm):
        h = effective_field(SpinState(m=mm), coupling, params, clamps, axes=axes)
        return llg_derivative(mm, h, params)

    for _ in range(n_steps):
        k1 = f(m)
        k2 = f(m + 0.5 * dt * k1)
        k3 = f(m + 0.5 * dt * k2)
        k4 = f(m + dt * k3)
        m = m + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        m[free] /= np.linalg.norm(m[free], axis=1, keepdims=True)
    return m


# ---------------------------------------------------------------------------
# Field and torque oracles
# ---------------------------------------------------------------------------

def test_dipolar_field_from_clamped_neighbor():
    # one magnet clamped +z, observer 100 nm away in plane: dipolar term is
    # -(ms*V)/(4 pi r^3) z^.  Observer moment along x so its own anisotropy
    # term vanishes.
    lay = pair_layout()
    p = MaterialParams(diameter=50e-9)
    ct = build_coupling_tensors(lay, p)
    clamps = ClampSet.of(2, {0: +1})
    st = SpinState(m=np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]))
    h = effective_field(st, ct, p, clamps)
    expected = -p.moment / (4 * math.pi * (100e-9) ** 3)
    assert h[1, 2] == pytest.approx(expected, rel=1e-12)
    assert h[1, 0] == 0.0 and h[1, 1] == 0.0
    # the clamped magnet receives no field at all
    assert np.all(h[0] == 0.0)


def test_anisotropy_field_along_axis():
    p = default_params()
    ct = single_coupling(p)
    tilt = np.array([[math.sin(0.3), 0.0, math.cos(0.3)]])
    st = SpinState(m=tilt)
    h = effective_field(st, ct, p, clamps=None)
    # axis defaults to z: H = H_k * m_z * z^
    assert h[0, 2] == pytest.approx(p.anisotropy_field * math.cos(0.3), rel=1e-12)
    assert h[0, 0] == 0.0
    # with the axis along the moment the field is H_k along that axis
    h2 = effective_field(st, ct, p, clamps=None, axes=tilt)
    assert np.allclose(h2, p.anisotropy_field * tilt, rtol=1e-12)


def test_llg_derivative_analytic():
    # m = x^, H = H z^: m x H = -H y^, m x (m x H) = -H z^
    p = MaterialParams(alpha=0.25)
    m = np.array([[1.0, 0.0, 0.0]])
    hmag = 1e4
    h = np.array([[0.0, 0.0, hmag]])
    d = llg_derivative(m, h, p)
    pref = p.gamma * MU0 / (1 + p.alpha ** 2)
    assert d[0, 0] == pytest.approx(0.0, abs=1e-30)
    assert d[0, 1] == pytest.approx(pref * hmag, rel=1e-12)
    assert d[0, 2] == pytest.approx(pref * p.alpha * hmag, rel=1e-12)


def test_llg_zero_when_aligned():
    p = default_params()
    m = np.array([[0.0, 0.0, 1.0]])
    h = np.array([[0.0, 0.0, 5e4]])
    assert np.all(llg_derivative(m, h, p) == 0.0)


# ---------------------------------------------------------------------------
# Precession against the analytic frequency
# ---------------------------------------------------------------------------

def test_undamped_precession_frequency():
    # free magnet tilted 60 deg from its z easy axis, no damping: m_z stays
    # fixed and m precesses about z at omega = gamma * mu0 * H_k * m_z.
    p = MaterialParams(alpha=0.0)
    ct = single_coupling(p)
    theta = math.radians(60.0)
    st = SpinState(m=np.array([[math.sin(theta), 0.0, math.cos(theta)]]))
    clamps = ClampSet.none(1)
    dt = 1e-12
    n_steps = 10000
    res = run_interval(st, ct, p, clamps, n_steps, dt, record_every=1)
    mz = res.trace.m[:, 0, 2]
    assert np.max(np.abs(mz - math.cos(theta))) < 1e-9
    phase = np.unwrap(np.arctan2(res.trace.m[:, 0, 1], res.trace.m[:, 0, 0]))
    omega_meas = (phase[-1] - phase[0]) / (res.trace.times[-1] - res.trace.times[0])
    omega_ref = p.gamma * MU0 * p.anisotropy_field * math.cos(theta)
    assert abs(omega_meas - omega_ref) / omega_ref < 1e-3
    # direction: positive gamma precesses counterclockwise about +z
    assert omega_meas > 0


def test_damped_motion_relaxes_to_axis():
    p = MaterialParams(alpha=0.6)
    ct = single_coupling(p)
    theta = math.radians(60.0)
    st = SpinState(m=np.array([[math.sin(theta), 0.0, math.cos(theta)]]))
    res = run_interval(st, ct, p, ClampSet.none(1), 20000, 1e-12)
    assert res.state.m[0, 2] > 0.9999


# ---------------------------------------------------------------------------
# Conservation and bookkeeping
# ---------------------------------------------------------------------------

def test_norm_drift_below_tolerance():
    sim = Simulator(default_layout(), default_params(), SimConfig())
    st = sim.initial_state()
    res = sim.hold_sample(st, (1, 0))
    assert res.max_norm_drift < 1e-6
    assert np.allclose(np.linalg.norm(res.state.m, axis=1), 1.0, atol=1e-12)


def test_energy_never_increases_under_damping():
    sim = Simulator(default_layout(), default_params(), SimConfig())
    st = sim.initial_state()
    res = sim.hold_sample(st, (1, 0), record_every=10)
    energies = np.array([total_energy(SpinState(m=fr), sim.coupling, sim.params,
                                      axes=sim.layout.axes)
                         for fr in res.trace.m])
    scale = np.abs(energies).max()
    increases = np.diff(energies)
    assert np.all(increases <= 1e-8 * scale)


def test_clamped_magnets_pinned_exactly():
    sim = Simulator(default_layout(), default_params(), SimConfig())
    res = sim.hold_sample(sim.initial_state(), (1, 0))
    a, b = sim.layout.input_indices
    assert tuple(res.state.m[a]) == (0.0, 0.0, 1.0)
    assert tuple(res.state.m[b]) == (0.0, 0.0, -1.0)


def test_clampset_validation():
    with pytest.raises(ValueError):
        ClampSet.of(3, {5: 1})
    with pytest.raises(ValueError):
        ClampSet.of(3, {0: 2})
    with pytest.raises(ValueError):
        ClampSet(np.array([0, 3]))


# ---------------------------------------------------------------------------
# Determinism and numerical cross-checks
# ---------------------------------------------------------------------------

def test_repeat_runs_bit_identical():
    sim = Simulator(default_layout(), default_params(), SimConfig())
    r1 = sim.hold_sample(sim.initial_state(), (1, 1))
    r2 = sim.hold_sample(sim.initial_state(), (1, 1))
    assert np.array_equal(r1.state.m, r2.state.m)


def test_kernel_matches_numpy_reference():
    # same RK4, two implementations: compiled explicit loops vs vectorized
    # numpy. Summation order differs so agreement is to roundoff, not bits.
    lay = default_layout()
    p = default_params()
    ct = build_coupling_tensors(lay, p)
    clamps = ClampSet.of(lay.n_magnets, {0: 1, 21: -1})
    st = SpinState(m=lay.axes.copy())
    n_steps = 300
    res = run_interval(st, ct, p, clamps, n_steps, 1e-12, axes=lay.axes)
    ref = rk4_reference(lay.axes.copy(), ct, p, clamps, n_steps, 1e-12, axes=lay.axes)
    assert np.max(np.abs(res.state.m - ref)) < 1e-10


def test_halved_step_converges():
    sim = Simulator(default_layout(), default_params(), SimConfig())
    st = sim.initial_state()
    clamps = sim.clamps_for_bits((1, 0))
    coarse = run_interval(st, sim.coupling, sim.params, clamps, 3000, 1e-12,
                          axes=sim.layout.axes)
    fine = run_interval(st, sim.coupling, sim.params, clamps, 6000, 0.5e-12,
                        axes=sim.layout.axes)
    assert np.max(np.abs(coarse.state.m - fine.state.m)) < 1e-3


def test_step_equals_one_step_run():
    lay = default_layout()
    p = default_params()
    ct = build_coupling_tensors(lay, p)
    clamps = ClampSet.of(lay.n_magnets, {0: 1, 21: -1})
    st = SpinState(m=lay.axes.copy())
    s1 = step(st, ct, p, clamps, 1e-12, axes=lay.axes)
    s2 = run_interval(st, ct, p, clamps, 1, 1e-12, axes=lay.axes).state
    assert np.array_equal(s1.m, s2.m)
    assert s1.t == 1e-12


# ---------------------------------------------------------------------------
# Thermal hook
# ---------------------------------------------------------------------------

def test_thermal_field_reproducible_and_off_by_default():
    lay = default_layout()
    p = default_params()
    ct = build_coupling_tensors(lay, p)
    clamps = ClampSet.of(lay.n_magnets, {0: 1, 21: -1})
    st = SpinState(m=lay.axes.copy())
    quiet = run_interval(st, ct, p, clamps, 200, 1e-12, axes=lay.axes)
    noisy1 = run_interval(st, ct, p, clamps, 200, 1e-12, axes=lay.axes,
                          thermal_std=500.0, seed=11)
    noisy2 = run_interval(st, ct, p, clamps, 200, 1e-12, axes=lay.axes,
                          thermal_std=500.0, seed=11)
    other = run_interval(st, ct, p, clamps, 200, 1e-12, axes=lay.axes,
                         thermal_std=500.0, seed=12)
    assert np.array_equal(noisy1.state.m, noisy2.state.m)
    assert not np.array_equal(noisy1.state.m, quiet.state.m)
    assert not np.array_equal(noisy1.state.m, other.state.m)
    assert np.allclose(np.linalg.norm(noisy1.state.m, axis=1), 1.0, atol=1e-12)


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------

def test_default_coupling_ratio_in_switching_window():
    lay = default_layout()
    p = default_params()
    ct = build_coupling_tensors(lay, p)
    assert 0.3 <= coupling_ratio(lay, ct, p) <= 3.0


def test_calibrate_anisotropy_hits_requested_ratio():
    lay = default_layout()
    p = calibrate_anisotropy(default_layout(), default_params(), ratio=1.5)
    ct = build_coupling_tensors(lay, p)
    assert coupling_ratio(lay, ct, p) == pytest.approx(1.5, rel=1e-12)
    with pytest.raises(ValueError):
        calibrate_anisotropy(lay, default_params(), ratio=0.0)


# ---------------------------------------------------------------------------
# Recording
# ---------------------------------------------------------------------------

def test_trace_shape_and_times():
    sim = Simulator(default_layout(), default_params(), SimConfig())
    res = sim.run(sim.initial_state(), sim.clamps_for_bits((0, 1)),
                  n_steps=300, record_every=100)
    tr = res.trace
    assert tr.m.shape == (4, 22, 3)  # initial + 3 recorded frames
    assert np.allclose(tr.times, [0.0, 1e-10, 2e-10, 3e-10])
    assert np.array_equal(tr.m[-1], res.state.m)
    assert tr.m_z.shape == (4, 22)


def test_trace_csv_roundtrip(tmp_path):
    sim = Simulator(default_layout(), default_params(), SimConfig())
    res = sim.run(sim.initial_state(), sim.clamps_for_bits((1, 1)),
                  n_steps=200, record_every=50)
    path = tmp_path / "trace.csv"
    save_trace_csv(res.trace, path)
    header = path.read_text().splitlines()[0]
    assert header.startswith("t_ns,m_z_00,m_z_01")
    times_ns, mz = load_trace_csv(path)
    assert np.array_equal(times_ns, res.trace.times * 1e9)
    assert np.array_equal(mz, res.trace.m_z)


def test_trace_csv_rejects_other_files(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        load_trace_csv(path)


def test_repeated_trace_files_byte_identical(tmp_path):
    sim = Simulator(default_layout(), default_params(), SimConfig())
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (p1, p2):
        res = sim.run(sim.initial_state(), sim.clamps_for_bits((1, 0)),
                      n_steps=200, record_every=50)
        save_trace_csv(res.trace, p)
    assert p1.read_bytes() == p2.read_bytes()
