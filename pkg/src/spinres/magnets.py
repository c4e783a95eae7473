"""Physical data model of the nanomagnet array.

Materials, planar geometry, and the precomputed pairwise dipolar coupling
tensors that fix the reservoir's internal weights. All quantities are strict
SI (m, s, A/m, J/m^3); file formats carry units in their headers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MU0 = 4e-7 * math.pi  # vacuum permeability (T*m/A)

ROLE_INPUT = "input"
ROLE_READOUT = "readout"


class LayoutError(ValueError):
    """A layout failed validation (overlap, duplicate, bad indices...)."""


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MaterialParams:
    """Per-magnet material constants and disc geometry.

    The anisotropy easy axis is out-of-plane (z) by default; individual
    magnets may carry a small fixed axis tilt via :class:`ArrayLayout.axes`
    (fabrication dispersion), without which a planar array of z-clamped
    point dipoles has zero torque everywhere and never evolves.
    """

    ms: float = 1.4e6          # saturation magnetization (A/m)
    ku: float = 17443.04186835722  # uniaxial anisotropy constant (J/m^3)
    alpha: float = 0.2         # Gilbert damping (dimensionless)
    gamma: float = 1.760859e11  # gyromagnetic ratio (rad s^-1 T^-1)
    diameter: float = 70e-9    # disc diameter (m)
    thickness: float = 25e-9   # disc thickness (m)

    def __post_init__(self):
        if self.ms <= 0:
            raise ValueError(f"ms must be > 0, got {self.ms}")
        if self.ku < 0:
            raise ValueError(f"ku must be >= 0, got {self.ku}")
        # alpha = 0 is allowed so undamped precession runs are expressible.
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.diameter <= 0 or self.thickness <= 0:
            raise ValueError("diameter and thickness must be > 0")

    @property
    def volume(self) -> float:
        """Disc volume (m^3)."""
        return math.pi * (self.diameter / 2.0) ** 2 * self.thickness

    @property
    def moment(self) -> float:
        """Saturation magnetic moment ms*V (A*m^2)."""
        return self.ms * self.volume

    @property
    def anisotropy_field(self) -> float:
        """Uniaxial anisotropy field H_k = 2*ku/(mu0*ms) (A/m)."""
        return 2.0 * self.ku / (MU0 * self.ms)


@dataclass(frozen=True)
class ArrayLayout:
    """Planar positions and roles of all magnets in the array.

    positions: (N, 2) coordinates in meters, single plane.
    input_indices: ordered magnet indices driven by the input stream.
    readout_indices: ordered magnet indices sampled as reservoir state.
    axes: (N, 3) unit easy-axis vectors; defaults to +z for every magnet.
    """

    positions: np.ndarray
    input_indices: tuple[int, ...]
    readout_indices: tuple[int, ...]
    axes: np.ndarray | None = None

    def __post_init__(self):
        pos = _readonly(np.asarray(self.positions, dtype=np.float64).reshape(-1, 2))
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "input_indices", tuple(int(i) for i in self.input_indices))
        object.__setattr__(self, "readout_indices", tuple(int(i) for i in self.readout_indices))
        if self.axes is None:
            ax = np.zeros((len(pos), 3))
            ax[:, 2] = 1.0
        else:
            ax = np.asarray(self.axes, dtype=np.float64).reshape(-1, 3)
        object.__setattr__(self, "axes", _readonly(ax))

    @property
    def n_magnets(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class CouplingTensor:
    """Pairwise point-dipole coupling tensors for a layout.

    tensors[i, j] is the 3x3 kernel D_ij (units 1/m^3) such that the dipolar
    field at magnet i from magnet j is H_ij = D_ij @ (moment * m_j), in A/m.
    """

    tensors: np.ndarray  # (N, N, 3, 3), D_ii = 0
    moment: float        # ms*V (A*m^2)

    def __post_init__(self):
        object.__setattr__(self, "tensors", _readonly(self.tensors))

    @property
    def n_magnets(self) -> int:
        return self.tensors.shape[0]

    def field_kernels(self) -> np.ndarray:
        """(N, N, 3, 3) kernels premultiplied by the moment: H_i = sum_j K[i,j] @ m_j."""
        return self.tensors * self.moment


@dataclass(frozen=True)
class SimConfig:
    """Integrator timing and reproducibility knobs."""

    dt: float = 1e-12            # integrator step (s)
    sample_period: float = 3e-9  # time between inputs (s)
    rng_seed: int = 0
    thermal_enabled: bool = False
    thermal_field: float = 0.0   # Langevin field amplitude (A/m); hook, off by default

    def __post_init__(self):
        if not 0 < self.dt <= self.sample_period:
            raise ValueError(f"need 0 < dt <= sample_period, got dt={self.dt}, "
                             f"sample_period={self.sample_period}")
        ratio = self.sample_period / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * ratio:
            raise ValueError(f"sample_period/dt must be an integer, got {ratio}")

    @property
    def steps_per_sample(self) -> int:
        return round(self.sample_period / self.dt)


@dataclass
class LayoutValidation:
    """Outcome of validate_layout: every violation, with offending indices."""

    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def raise_if_invalid(self):
        if self.problems:
            raise LayoutError("; ".join(self.problems))


def validate_layout(layout: ArrayLayout, params: MaterialParams) -> LayoutValidation:
    """Check every ArrayLayout invariant against the magnet diameter.

    Collects all violations rather than stopping at the first one.
    """
    result = LayoutValidation()
    pos = layout.positions
    n = layout.n_magnets

    for name, idxs in (("input_indices", layout.input_indices),
                       ("readout_indices", layout.readout_indices)):
        if len(idxs) < 1:
            result.problems.append(f"{name} is empty")
        bad = [i for i in idxs if not 0 <= i < n]
        if bad:
            result.problems.append(f"{name} out of range for {n} magnets: {bad}")

    overlap_roles = sorted(set(layout.input_indices) & set(layout.readout_indices))
    if overlap_roles:
        result.problems.append(f"indices serve as both input and readout: {overlap_roles}")

    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    iu = np.triu_indices(n, k=1)
    dup = [(int(i), int(j)) for i, j in zip(*iu) if dist[i, j] == 0.0]
    if dup:
        result.problems.append(f"duplicate positions: {dup}")
    close = [(int(i), int(j)) for i, j in zip(*iu)
             if 0.0 < dist[i, j] < params.diameter]
    if close:
        result.problems.append(
            f"centers closer than one diameter ({params.diameter} m): {close}")

    norms = np.linalg.norm(layout.axes, axis=1)
    bad_axes = [int(i) for i in np.nonzero(np.abs(norms - 1.0) > 1e-9)[0]]
    if bad_axes:
        result.problems.append(f"easy axes not unit length at indices: {bad_axes}")
    if layout.axes.shape[0] != n:
        result.problems.append(
            f"axes count {layout.axes.shape[0]} != magnet count {n}")

    return result


def build_coupling_tensors(layout: ArrayLayout, params: MaterialParams) -> CouplingTensor:
    """Point-dipole kernels D_ij = (3 r^ r^T - I) / (4 pi r^3) for all pairs.

    Each magnet is treated as a point dipole at its center with moment
    ms*V*m. D_ii = 0 (no self-field).
    """
    validate_layout(layout, params).raise_if_invalid()
    n = layout.n_magnets
    tensors = np.zeros((n, n, 3, 3))
    eye = np.eye(3)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            rvec = np.array([layout.positions[i, 0] - layout.positions[j, 0],
                             layout.positions[i, 1] - layout.positions[j, 1],
                             0.0])
            r = np.linalg.norm(rvec)
            rhat = rvec / r
            tensors[i, j] = (3.0 * np.outer(rhat, rhat) - eye) / (4.0 * math.pi * r ** 3)
    return CouplingTensor(tensors=tensors, moment=params.moment)


# Fixed irregular 22-magnet arrangement: inputs A and B at opposite ends,
# 20 readout nodes between them, nearest-neighbor spacing 1.5-2.6 diameters.
# Coordinates in nm; axes are unit easy-axis vectors with fixed per-magnet
# tilts (polar 5-45 degrees, seeded azimuths). The tilt dispersion spreads the
# per-magnet switching thresholds, which is what lets the array both respond
# to new inputs and retain the previous symbol in bistable state; with exact
# z axes everywhere the planar array has zero torque and never evolves.
# ku is set so the peak all-aligned dipolar field is 1.9x the anisotropy
# field (see calibrate_anisotropy).
_DEFAULT_POSITIONS_NM: list[tuple[float, float]] = [
    (0.00, 220.00),
    (43.79, 348.49),
    (48.49, 96.96),
    (178.57, 391.16),
    (186.10, 40.28),
    (217.53, 177.64),
    (271.96, 320.53),
    (105.88, 236.46),
    (308.31, 21.07),
    (357.03, 115.83),
    (414.05, 400.38),
    (450.18, 170.52),
    (756.76, 337.06),
    (465.01, 293.47),
    (527.04, 80.32),
    (348.32, 229.50),
    (590.98, 383.67),
    (624.34, 283.21),
    (627.76, 171.78),
    (654.89, 40.28),
    (736.84, 106.00),
    (800.00, 220.00),
]
_DEFAULT_AXES: list[tuple[float, float, float]] = [
    (0.0, 0.0, 1.0),
    (0.3993479265480051, -0.30096337795749145, 0.8659920777294821),
    (0.09125410316021666, 0.5810503721375685, 0.8087355276573533),
    (0.20492824820496322, -0.20868769488718664, 0.9562708084482751),
    (0.03930110220708842, -0.08187280995275396, 0.9958675947914704),
    (-0.588040188603388, 0.12010224349827564, 0.7998651059359776),
    (-0.05230094976527776, 0.28971255829299597, 0.9556836527957236),
    (-0.246648627725845, 0.08866541121935326, 0.9650403614845653),
    (-0.4016819746219776, -0.14034478753903273, 0.9049612875004172),
    (0.18669097325807213, -0.6797095750331926, 0.7093245900940912),
    (0.4970952891545464, -0.03453664192982075, 0.8670083585897942),
    (0.12584283310949426, 0.19888173901881073, 0.9719103020545824),
    (0.47379718726660947, 0.13424190141063436, 0.8703420805889527),
    (-0.11145141828835323, -0.010456714526068958, 0.9937148677980192),
    (0.34801023709631396, -0.19946548227482652, 0.9160253251177274),
    (-0.5005771739985841, -0.04451991994719728, 0.8645463952845367),
    (0.006567677021241675, 0.4205877341506085, 0.907228098936867),
    (0.03376048326975619, 0.08917866218760476, 0.9954433163067707),
    (0.16489959608860744, 0.5141699889155131, 0.8416872018205072),
    (0.3383401730167429, 0.007939910469724528, 0.9409903746291634),
    (0.34934179026708767, 0.5103152404775343, 0.7858362863277201),
    (0.0, 0.0, 1.0),
]
_DEFAULT_INPUTS = (0, 21)


def default_layout() -> ArrayLayout:
    """The shipped 22-magnet layout: 2 inputs + 20 readout nodes."""
    pos = np.asarray(_DEFAULT_POSITIONS_NM, dtype=np.float64) * 1e-9
    axes = np.asarray(_DEFAULT_AXES, dtype=np.float64)
    readout = tuple(i for i in range(len(pos)) if i not in _DEFAULT_INPUTS)
    return ArrayLayout(positions=pos, input_indices=_DEFAULT_INPUTS,
                       readout_indices=readout, axes=axes)


def default_params() -> MaterialParams:
    """Shipped material defaults; ku is set by the coupling calibration."""
    return MaterialParams()


# ---------------------------------------------------------------------------
# Layout and material files: plain structured text, lossless round-trip.
# ---------------------------------------------------------------------------

def save_layout(layout: ArrayLayout, path: str | Path) -> None:
    """Write per-magnet records: index x_m y_m role axis_x axis_y axis_z."""
    lines = ["# nanomagnet array layout",
             "# columns: index x_m y_m role axis_x axis_y axis_z",
             "# inputs: " + ",".join(str(i) for i in layout.input_indices),
             "# readouts: " + ",".join(str(i) for i in layout.readout_indices)]
    roles = {}
    for i in layout.input_indices:
        roles[i] = ROLE_INPUT
    for i in layout.readout_indices:
        roles[i] = ROLE_READOUT
    for i in range(layout.n_magnets):
        x, y = (float(v) for v in layout.positions[i])
        ax, ay, az = (float(v) for v in layout.axes[i])
        lines.append(f"{i} {x!r} {y!r} {roles.get(i, ROLE_READOUT)} {ax!r} {ay!r} {az!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_layout(path: str | Path) -> ArrayLayout:
    text = Path(path).read_text()
    inputs: tuple[int, ...] | None = None
    readouts: tuple[int, ...] | None = None
    rows = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("inputs:"):
                inputs = tuple(int(t) for t in body[len("inputs:"):].split(",") if t.strip())
            elif body.startswith("readouts:"):
                readouts = tuple(int(t) for t in body[len("readouts:"):].split(",") if t.strip())
            continue
        parts = line.split()
        if len(parts) != 7:
            raise LayoutError(f"malformed layout record: {line!r}")
        idx = int(parts[0])
        rows[idx] = (float(parts[1]), float(parts[2]), parts[3],
                     float(parts[4]), float(parts[5]), float(parts[6]))
    n = len(rows)
    if sorted(rows) != list(range(n)):
        raise LayoutError(f"layout indices are not 0..{n - 1}")
    pos = np.array([[rows[i][0], rows[i][1]] for i in range(n)])
    axes = np.array([[rows[i][3], rows[i][4], rows[i][5]] for i in range(n)])
    if inputs is None:
        inputs = tuple(i for i in range(n) if rows[i][2] == ROLE_INPUT)
    if readouts is None:
        readouts = tuple(i for i in range(n) if rows[i][2] == ROLE_READOUT)
    return ArrayLayout(positions=pos, input_indices=inputs,
                       readout_indices=readouts, axes=axes)


_MATERIAL_KEYS = {
    "ms_A_per_m": "ms",
    "ku_J_per_m3": "ku",
    "alpha": "alpha",
    "gamma_rad_per_s_T": "gamma",
    "diameter_m": "diameter",
    "thickness_m": "thickness",
}


def save_material(params: MaterialParams, path: str | Path) -> None:
    """Write key-value material records with SI units in the key names."""
    lines = ["# magnet material parameters (SI)"]
    for key, attr in _MATERIAL_KEYS.items():
        lines.append(f"{key} = {getattr(params, attr)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_material(path: str | Path) -> MaterialParams:
    values = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in _MATERIAL_KEYS:
            raise ValueError(f"unknown material key: {key}")
        values[_MATERIAL_KEYS[key]] = float(raw.strip())
    return MaterialParams(**values)
