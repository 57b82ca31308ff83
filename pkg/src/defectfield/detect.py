"""Locate field defects and measure their topological indices.

Dislocations are amplitude zeros of a complex scalar wave with quantized
phase winding; disclinations are simultaneous zeros of both transverse
potential components. Windings come from sums of wrapped phase steps
around closed loops or grid plaquettes, so results are exact integers by
construction. Pattern-alignment fits measure the rigid rotation rate of
the transverse azimuth pattern in time and its twist rate along the
propagation axis, and the rotation per period yields the time-defect
(tifold) index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .fields import ComplexScalarField, GridSpec, PotentialField

DEFAULT_TOL_AMP = 1e-9
ALIGN_GRID = 4096
ALIGN_REFINE_TOL = 1e-12
FIT_RESIDUAL_TOL = 1e-6
STEP_TARGET = math.pi / 4  # per-substep alignment angle kept well inside (-pi/2, pi/2)

TWO_PI = 2.0 * math.pi


class NearZeroOnLoopError(ValueError):
    """Loop passes too close to an amplitude zero for the phase to be reliable."""


class AmbiguousStepError(ValueError):
    """A wrapped phase step equals pi within tolerance; the loop is too coarse."""


class NonIntegerWindingError(ValueError):
    """Accumulated phase is not an integer multiple of 2*pi within tolerance."""


class RigidRotationFitError(RuntimeError):
    """Azimuth patterns are not related by a rigid rotation."""


class UndefinedIndexError(ValueError):
    """The index is undefined for the given parameters (zero frequency)."""


class NonRationalIndexError(RuntimeError):
    """Fitted index is not near a small rational; carries the raw value."""

    def __init__(self, raw: float):
        super().__init__(f"fitted index {raw!r} is not within 1e-9 of p/q with q <= 4")
        self.raw = raw


def wrap_angle(a):
    """Wrap angle(s) to (-pi, pi]."""
    w = np.mod(a, TWO_PI)
    return np.where(w > math.pi, w - TWO_PI, w)


@dataclass(frozen=True)
class LoopPath:
    """Closed polyline in a z = const plane; orientation follows vertex order.

    Vertices are (x, y) coordinates with the first vertex repeated at the
    end. Counterclockwise order (viewed from +z) gives positive winding.
    The polyline must be simple; this is a caller contract and is not
    validated.
    """

    points: np.ndarray
    z: float = 0.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("points must be an (m, 2) array")
        scale = max(1.0, float(np.abs(pts).max()))
        if np.max(np.abs(pts[0] - pts[-1])) > 1e-9 * scale:
            raise ValueError("loop is not closed (first vertex must equal last)")
        pts = pts.copy()
        pts[-1] = pts[0]
        if len(np.unique(pts[:-1], axis=0)) < 4:
            raise ValueError("loop needs at least 4 distinct vertices")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "z", float(self.z))

    def reversed(self) -> "LoopPath":
        return LoopPath(self.points[::-1].copy(), self.z)

    @classmethod
    def circle(cls, cx: float, cy: float, radius: float, n: int = 64,
               z: float = 0.0) -> "LoopPath":
        th = np.linspace(0.0, TWO_PI, n + 1)
        pts = np.column_stack([cx + radius * np.cos(th), cy + radius * np.sin(th)])
        pts[-1] = pts[0]
        return cls(pts, z)

    @classmethod
    def rectangle(cls, x0: float, y0: float, x1: float, y1: float,
                  per_side: int = 16, z: float = 0.0) -> "LoopPath":
        s = np.linspace(0.0, 1.0, per_side, endpoint=False)
        bottom = np.column_stack([x0 + s * (x1 - x0), np.full_like(s, y0)])
        right = np.column_stack([np.full_like(s, x1), y0 + s * (y1 - y0)])
        top = np.column_stack([x1 - s * (x1 - x0), np.full_like(s, y1)])
        left = np.column_stack([np.full_like(s, x0), y1 - s * (y1 - y0)])
        pts = np.vstack([bottom, right, top, left, [[x0, y0]]])
        return cls(pts, z)

    @classmethod
    def from_node_indices(cls, grid: GridSpec, ij, k: int = 0) -> "LoopPath":
        ij = np.asarray(ij, dtype=int)
        pts = np.column_stack([
            grid.origin[0] + ij[:, 0] * grid.spacing[0],
            grid.origin[1] + ij[:, 1] * grid.spacing[1],
        ])
        if np.any(pts[0] != pts[-1]):
            pts = np.vstack([pts, pts[:1]])
        return cls(pts, grid.origin[2] + k * grid.spacing[2])


@dataclass(frozen=True)
class DefectRecord:
    """A detected defect: kind, location, signed index, and amplitude margin."""

    kind: str
    position: tuple[float, float, float]
    index: Fraction
    confidence: float


def _nearest_slice(grid: GridSpec, z: float) -> int:
    nz = grid.dims[2]
    if nz == 1:
        return 0
    k = int(round((z - grid.origin[2]) / grid.spacing[2]))
    return min(max(k, 0), nz - 1)


def _loop_values(field: ComplexScalarField, loop: LoopPath) -> np.ndarray:
    k = _nearest_slice(field.grid, loop.z)
    xs = field.grid.axis_coords(0)
    ys = field.grid.axis_coords(1)
    interp = RegularGridInterpolator((xs, ys), field.values[:, :, k], method="linear")
    return interp(loop.points)


def _winding_from_values(values: np.ndarray, tol_amp: float) -> int:
    amp = np.abs(values)
    if np.any(amp <= tol_amp):
        raise NearZeroOnLoopError(
            f"loop amplitude {amp.min():.3e} is at or below tolerance {tol_amp:.3e}"
        )
    steps = wrap_angle(np.diff(np.angle(values)))
    if np.any(np.abs(np.abs(steps) - math.pi) <= 1e-9):
        raise AmbiguousStepError("a phase step equals pi within 1e-9; refine the loop")
    n = float(np.sum(steps)) / TWO_PI
    if abs(n - round(n)) > 1e-9:
        raise NonIntegerWindingError(f"accumulated winding {n!r} is not an integer")
    return int(round(n))


def phase_winding(field: ComplexScalarField, loop: LoopPath,
                  tol_amp: float = DEFAULT_TOL_AMP) -> int:
    """Signed number of 2*pi phase turns along the loop (positive CCW about +z)."""
    return _winding_from_values(_loop_values(field, loop), tol_amp)


def _plaquette_windings(values2d: np.ndarray) -> np.ndarray:
    """Integer winding of every 2x2 plaquette of a complex slice (CCW about +z)."""
    phase = np.angle(values2d)
    dx = wrap_angle(np.diff(phase, axis=0))  # step (i, j) -> (i+1, j)
    dy = wrap_angle(np.diff(phase, axis=1))  # step (i, j) -> (i, j+1)
    total = dx[:, :-1] + dy[1:, :] - dx[:, 1:] - dy[:-1, :]
    return np.round(total / TWO_PI).astype(int)


def _plaquette_centroid(grid: GridSpec, i: int, j: int, k: int):
    x0, y0, z0 = grid.node_position(i, j, k)
    return (x0 + grid.spacing[0] / 2, y0 + grid.spacing[1] / 2, z0)


def find_dislocations(field: ComplexScalarField, z_slice: int) -> list[DefectRecord]:
    """Scan one z slice for plaquettes carrying nonzero phase winding."""
    values = field.slice_z(z_slice)
    if values.shape[0] < 2 or values.shape[1] < 2:
        raise ValueError("slice must be at least 2x2 nodes")
    q = _plaquette_windings(values)
    amp = np.abs(values)
    records = []
    for i, j in np.argwhere(q != 0):
        conf = float(amp[i:i + 2, j:j + 2].min())
        records.append(DefectRecord(
            kind="dislocation",
            position=_plaquette_centroid(field.grid, i, j, z_slice),
            index=Fraction(int(q[i, j])),
            confidence=conf,
        ))
    records.sort(key=lambda r: r.position)
    return records


def _ring_indices(i: int, j: int):
    # 8-node counterclockwise ring around node (i, j), closed
    ring = [(i + 1, j), (i + 1, j + 1), (i, j + 1), (i - 1, j + 1),
            (i - 1, j), (i - 1, j - 1), (i, j - 1), (i + 1, j - 1), (i + 1, j)]
    return tuple(np.array(v) for v in zip(*ring))


def find_disclinations(field: PotentialField, z_slice: int,
                       tol_amp: float = DEFAULT_TOL_AMP,
                       rel_zero: float = 0.75) -> list[DefectRecord]:
    """Scan one z slice for simultaneous zeros of both transverse components.

    Candidates are plaquettes where Ax and Ay both carry nonzero phase
    winding (both components vanish inside) and whose corner amplitudes
    sit below ``rel_zero`` times the slice median; nodes where both
    amplitudes are below ``tol_amp`` times the median transverse amplitude
    are treated as exact on-node zeros and indexed by the winding of Ax
    around the surrounding 8-node ring.
    """
    ax = field.ax[:, :, z_slice]
    ay = field.ay[:, :, z_slice]
    nx, ny = ax.shape
    if nx < 2 or ny < 2:
        raise ValueError("slice must be at least 2x2 nodes")
    amp_x = np.abs(ax)
    amp_y = np.abs(ay)
    amp_t = np.hypot(amp_x, amp_y)
    med_t = float(np.median(amp_t))
    if med_t == 0.0:
        return []
    records = []
    consumed = np.zeros((nx - 1, ny - 1), dtype=bool)

    node_zero = (amp_x <= tol_amp * med_t) & (amp_y <= tol_amp * med_t)
    for i, j in np.argwhere(node_zero):
        if not (1 <= i <= nx - 2 and 1 <= j <= ny - 2):
            continue
        ring = _ring_indices(i, j)
        ring_vals = ax[ring]
        if np.any(np.abs(ring_vals) <= tol_amp * med_t):
            continue
        idx = _winding_from_values(ring_vals, tol_amp * med_t)
        if idx != 0:
            records.append(DefectRecord(
                kind="disclination",
                position=field.grid.node_position(i, j, z_slice),
                index=Fraction(idx),
                confidence=float(amp_t[ring].min()),
            ))
        consumed[max(i - 1, 0):i + 1, max(j - 1, 0):j + 1] = True

    qx = _plaquette_windings(ax)
    qy = _plaquette_windings(ay)
    med_x = float(np.median(amp_x))
    med_y = float(np.median(amp_y))
    for i, j in np.argwhere((qx != 0) & (qy != 0) & ~consumed):
        corner_x = amp_x[i:i + 2, j:j + 2].min()
        corner_y = amp_y[i:i + 2, j:j + 2].min()
        if corner_x > rel_zero * med_x or corner_y > rel_zero * med_y:
            continue
        records.append(DefectRecord(
            kind="disclination",
            position=_plaquette_centroid(field.grid, i, j, z_slice),
            index=Fraction(int(qx[i, j])),
            confidence=float(amp_t[i:i + 2, j:j + 2].min()),
        ))
    records.sort(key=lambda r: r.position)
    return records


def _circle_azimuths(model, thetas, z, t) -> np.ndarray:
    """Azimuth of the real transverse vector on the unit circle at angles thetas."""
    x = np.cos(thetas)
    y = np.sin(thetas)
    ax, ay, _, _ = model.components(x, y, z, t)
    return np.arctan2(np.real(ay), np.real(ax))


def _alignment_objective(model, thetas, beta_target, z_ref, t_ref, alphas):
    """Mean squared wrapped mismatch of the rotated reference pattern, per alpha."""
    th = thetas[None, :] - alphas[:, None]
    beta_ref = _circle_azimuths(model, th, z_ref, t_ref)
    d = wrap_angle(beta_ref + alphas[:, None] - beta_target[None, :])
    return np.mean(d * d, axis=1)


def _golden_min(f, lo: float, hi: float, tol: float = ALIGN_REFINE_TOL):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    mid = (a + b) / 2.0
    return mid, f(mid)


def _fit_rotation_step(model, thetas, beta_target, z_ref, t_ref):
    """Best rigid-rotation angle mapping the reference pattern onto the target.

    The objective is scanned on a dense grid over [0, 2*pi) and refined by
    golden section. Patterns with an exact half-turn symmetry have two
    global minimizers a half turn apart; the candidate closest to zero is
    returned, which is unambiguous while per-step angles stay inside
    (-pi/2, pi/2).
    """
    alphas = np.linspace(0.0, TWO_PI, ALIGN_GRID, endpoint=False)
    big = _alignment_objective(model, thetas, beta_target, z_ref, t_ref, alphas)
    i = int(np.argmin(big))
    step = TWO_PI / ALIGN_GRID

    def f(al: float) -> float:
        return float(_alignment_objective(
            model, thetas, beta_target, z_ref, t_ref, np.array([al]))[0])

    alpha_hat, g_hat = _golden_min(f, alphas[i] - step, alphas[i] + step)
    cand = float(wrap_angle(alpha_hat))
    alt = float(wrap_angle(alpha_hat - math.pi))
    g_alt = f(alt)
    if g_alt <= g_hat + 1e-12 and abs(alt) < abs(cand):
        return alt, math.sqrt(g_alt)
    return cand, math.sqrt(g_hat)


def _accumulate_rotation(model, stations, betas_at, refs_at, n_theta):
    thetas = TWO_PI * np.arange(n_theta) / n_theta
    total = 0.0
    worst = 0.0
    for a, b in zip(stations[:-1], stations[1:]):
        beta_target = betas_at(thetas, b)
        z_ref, t_ref = refs_at(a)
        alpha, res = _fit_rotation_step(model, thetas, beta_target, z_ref, t_ref)
        if res > FIT_RESIDUAL_TOL:
            raise RigidRotationFitError(
                f"alignment residual {res:.3e} exceeds {FIT_RESIDUAL_TOL:.0e}"
            )
        total += alpha
        worst = max(worst, res)
    return total, worst


def pattern_rotation_rate(model, t0: float, t1: float, n_theta: int = 64,
                          full_output: bool = False):
    """Angular velocity of the rigid rotation of the z = 0 azimuth pattern.

    The interval is split into substeps small enough that each alignment
    angle stays well inside a quarter turn, and the per-step angles are
    accumulated, so rotations exceeding a half turn (e.g. over a full
    period) are tracked unambiguously.
    """
    if n_theta < 16:
        raise ValueError("n_theta must be at least 16")
    if t1 < t0:
        raise ValueError("t1 must not precede t0")
    if t1 == t0:
        return (0.0, 0.0) if full_output else 0.0
    omega = model.params.omega
    m = max(1, math.ceil(abs(omega) * (t1 - t0) / 2.0 / STEP_TARGET))
    stations = np.linspace(t0, t1, m + 1)
    total, worst = _accumulate_rotation(
        model, stations,
        betas_at=lambda thetas, t: _circle_azimuths(model, thetas, 0.0, t),
        refs_at=lambda t: (0.0, t),
        n_theta=n_theta,
    )
    rate = total / (t1 - t0)
    return (rate, worst) if full_output else rate


def axial_twist_per_length(model, z0: float, z1: float, t: float,
                           n_theta: int = 64, full_output: bool = False):
    """Signed rotation rate of the azimuth pattern per unit z at fixed time."""
    if n_theta < 16:
        raise ValueError("n_theta must be at least 16")
    if z1 < z0:
        raise ValueError("z1 must not precede z0")
    if z1 == z0:
        return (0.0, 0.0) if full_output else 0.0
    k = model.params.k
    m = max(1, math.ceil(abs(k) * (z1 - z0) / 2.0 / STEP_TARGET))
    stations = np.linspace(z0, z1, m + 1)
    total, worst = _accumulate_rotation(
        model, stations,
        betas_at=lambda thetas, z: _circle_azimuths(model, thetas, z, t),
        refs_at=lambda z: (z, t),
        n_theta=n_theta,
    )
    rate = total / (z1 - z0)
    return (rate, worst) if full_output else rate


def tifold_index(model, n_theta: int = 64, full_output: bool = False):
    """Pattern rotation over one period divided by omega, snapped to p/q (q <= 4)."""
    omega = model.params.omega
    if omega == 0:
        raise UndefinedIndexError("index undefined for omega = 0")
    period = TWO_PI / omega
    rate, res = pattern_rotation_rate(model, 0.0, period, n_theta, full_output=True)
    raw = rate / omega
    snapped = Fraction(raw).limit_denominator(4)
    if abs(raw - float(snapped)) <= 1e-9:
        return (snapped, res) if full_output else snapped
    raise NonRationalIndexError(raw)
