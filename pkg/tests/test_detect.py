import math
from fractions import Fraction

import numpy as np
import pytest

from defectfield import (
    ComplexScalarField,
    DisclinationModel,
    DislocationModel,
    GridSpec,
    LoopPath,
    NonRationalIndexError,
    UndefinedIndexError,
    WaveParams,
    axial_twist_per_length,
    find_disclinations,
    find_dislocations,
    pattern_rotation_rate,
    phase_winding,
    sample_potential,
    sample_scalar,
    tifold_index,
)
from defectfield.detect import AmbiguousStepError, NearZeroOnLoopError

TWO_PI = 2.0 * math.pi


def vortex_slice(grid, defects, t=0.0):
    """Product of first-order zeros: one factor (w - w0) per signed defect."""
    X, Y, _ = grid.meshgrid()
    values = np.ones(grid.dims, dtype=complex)
    for x0, y0, charge in defects:
        sign = 1.0 if charge > 0 else -1.0
        w = (X - x0) + 1j * sign * (Y - y0)
        values *= w ** abs(charge)
    return ComplexScalarField(grid, t, values)


def analytic_winding_oracle(defects, loop_fn, n=4096):
    """Continuous winding by dense phase accumulation along the loop."""
    s = np.linspace(0.0, 1.0, n + 1)
    x, y = loop_fn(s)
    total = np.zeros(n + 1)
    for x0, y0, charge in defects:
        sign = 1.0 if charge > 0 else -1.0
        # the sign is carried by the conjugated factor itself
        ang = np.unwrap(np.angle((x - x0) + 1j * sign * (y - y0)))
        total += abs(charge) * ang
    return round((total[-1] - total[0]) / TWO_PI)


def test_loop_path_validation():
    with pytest.raises(ValueError):
        LoopPath(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))  # open
    with pytest.raises(ValueError):
        LoopPath(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]))  # too few
    loop = LoopPath.circle(0.0, 0.0, 1.0, n=8)
    assert np.array_equal(loop.points[0], loop.points[-1])
    rev = loop.reversed()
    assert np.array_equal(rev.points[0], loop.points[-1])


def test_winding_constant_field_is_zero():
    grid = GridSpec.centered((4.0, 4.0, 1.0), (41, 41, 1))
    field = ComplexScalarField(grid, 0.0, np.full(grid.dims, 2.0 - 1.0j))
    assert phase_winding(field, LoopPath.circle(0.0, 0.0, 1.0)) == 0


def test_winding_single_charge():
    grid = GridSpec.centered((4.0, 4.0, 1.0), (81, 81, 1))
    dx = grid.spacing[0]
    field = sample_scalar(DislocationModel(n=1, k=1.0, omega=1.0), grid, 0.0)
    loop = LoopPath.circle(0.0, 0.0, 5 * dx, n=64)
    assert phase_winding(field, loop) == 1


def test_winding_negative_double_charge_against_oracle():
    defects = [(0.0, 0.0, -2)]
    grid = GridSpec.centered((4.0, 4.0, 1.0), (81, 81, 1))
    dx = grid.spacing[0]
    radius = 5 * dx

    def loop_fn(s):
        return radius * np.cos(TWO_PI * s), radius * np.sin(TWO_PI * s)

    oracle = analytic_winding_oracle(defects, loop_fn)
    assert oracle == -2
    field = sample_scalar(DislocationModel(n=-2, k=1.0, omega=1.0), grid, 0.0)
    assert phase_winding(field, LoopPath.circle(0.0, 0.0, radius, n=64)) == oracle


def test_winding_near_zero_error():
    grid = GridSpec.centered((2.0, 2.0, 1.0), (21, 21, 1))
    field = ComplexScalarField(grid, 0.0, np.zeros(grid.dims, complex))
    with pytest.raises(NearZeroOnLoopError):
        phase_winding(field, LoopPath.circle(0.0, 0.0, 0.5))


def test_winding_ambiguous_step_error():
    grid = GridSpec.centered((4.0, 4.0, 1.0), (5, 5, 1))
    X, _, _ = grid.meshgrid()
    values = np.where(X >= 0, -1.0 + 0.0j, 1.0 + 0.0j)
    field = ComplexScalarField(grid, 0.0, values)
    square = LoopPath(np.array([
        [-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0]]))
    with pytest.raises(AmbiguousStepError):
        phase_winding(field, square)


def test_loop_deformation_invariance():
    grid = GridSpec.centered((6.0, 6.0, 1.0), (121, 121, 1))
    field = sample_scalar(DislocationModel(n=2, k=1.0, omega=1.0), grid, 0.0)
    rng = np.random.default_rng(42)
    for _ in range(10):
        if rng.uniform() < 0.5:
            cx, cy = rng.uniform(-0.4, 0.4, size=2)
            loop = LoopPath.circle(cx, cy, rng.uniform(0.8, 2.2), n=128)
        else:
            x0, y0 = rng.uniform(-2.2, -0.8, size=2)
            x1, y1 = rng.uniform(0.8, 2.2, size=2)
            loop = LoopPath.rectangle(x0, y0, x1, y1, per_side=48)
        assert phase_winding(field, loop) == 2
        # loops left of x=1.0 that stay away from the origin see no charge
        away = LoopPath.circle(1.8, 1.8, rng.uniform(0.3, 0.7), n=96)
        assert phase_winding(field, away) == 0


def test_winding_orientation_antisymmetry():
    grid = GridSpec.centered((4.0, 4.0, 1.0), (81, 81, 1))
    field = sample_scalar(DislocationModel(n=1, k=1.0, omega=1.0), grid, 0.0)
    loop = LoopPath.circle(0.0, 0.0, 1.0, n=96)
    assert phase_winding(field, loop) == -phase_winding(field, loop.reversed())


def test_charge_additivity():
    grid = GridSpec.centered((8.0, 8.0, 1.0), (161, 161, 1))
    defects = [(-1.0, 0.2, 1), (1.1, -0.3, -1), (0.3, 1.4, 2)]
    field = vortex_slice(grid, defects)
    # big loop encloses everything
    big = LoopPath.circle(0.0, 0.0, 3.0, n=256)
    assert phase_winding(field, big) == 2
    # smaller loop encloses only the first two
    lens = LoopPath.circle(0.0, -0.1, 1.3, n=256)
    enclosed = [c for x0, y0, c in defects if math.hypot(x0 - 0.0, y0 + 0.1) < 1.3]
    assert phase_winding(field, lens) == sum(enclosed)


def test_find_dislocations_constant_empty():
    grid = GridSpec.centered((4.0, 4.0, 1.0), (33, 33, 1))
    field = ComplexScalarField(grid, 0.0, np.full(grid.dims, 1.0 + 0.0j))
    assert find_dislocations(field, 0) == []


def test_find_dislocations_single_charge():
    # even node count keeps the axis strictly inside a plaquette
    grid = GridSpec.centered((4.0, 4.0, 1.0), (40, 40, 1))
    field = sample_scalar(DislocationModel(n=1, k=1.0, omega=1.0), grid, 0.0)
    records = find_dislocations(field, 0)
    assert len(records) == 1
    rec = records[0]
    assert rec.index == Fraction(1)
    cell_diag = math.hypot(*grid.spacing[:2])
    assert math.hypot(rec.position[0], rec.position[1]) <= cell_diag
    # slice-boundary oracle: the boundary loop winding equals the total charge
    margin = 2 * grid.spacing[0]
    half = 2.0 - margin
    boundary = LoopPath.rectangle(-half, -half, half, half, per_side=64)
    assert phase_winding(field, boundary) == sum(int(r.index) for r in records)


def test_find_dislocations_pair_conserves_charge():
    grid = GridSpec.centered((6.0, 6.0, 1.0), (120, 120, 1))
    field = vortex_slice(grid, [(-1.0, 0.0, 1), (1.0, 0.0, -1)])
    records = find_dislocations(field, 0)
    assert len(records) == 2
    assert sorted(int(r.index) for r in records) == [-1, 1]
    assert sum(int(r.index) for r in records) == 0
    plus = [r for r in records if r.index > 0][0]
    assert math.hypot(plus.position[0] + 1.0, plus.position[1]) < 0.1


def test_find_disclinations_axis_on_node():
    model = DisclinationModel(WaveParams.with_dispersion(k=1.0))
    grid = GridSpec.centered((4.0, 4.0, 1.0), (41, 41, 1))  # node exactly at origin
    field = sample_potential(model, grid, 0.0)
    records = find_disclinations(field, 0)
    assert len(records) == 1
    rec = records[0]
    assert rec.kind == "disclination"
    assert rec.index == Fraction(1)
    assert math.hypot(rec.position[0], rec.position[1]) < 1e-12


def test_find_disclinations_axis_in_plaquette():
    model = DisclinationModel(WaveParams.with_dispersion(k=1.0))
    base = GridSpec.centered((4.0, 4.0, 1.0), (41, 41, 1))
    dx, dy = base.spacing[0], base.spacing[1]
    shifted = GridSpec(base.dims, base.spacing,
                       (base.origin[0] + 0.5 * dx, base.origin[1] + 0.5 * dy, 0.0))
    field = sample_potential(model, shifted, 0.0)
    records = find_disclinations(field, 0)
    assert len(records) == 1
    assert records[0].index == Fraction(1)
    assert math.hypot(*records[0].position[:2]) <= math.hypot(dx, dy)


def test_find_disclinations_plane_wave_empty():
    class TransversePlaneWave:
        c = 1.0

        def components(self, x, y, z, t):
            carrier = np.exp(1j * (np.asarray(z) - t)) + 0.0 * np.asarray(x)
            return (carrier, 1j * carrier, 0.0 * carrier, 0.0 * carrier)

    grid = GridSpec.centered((4.0, 4.0, 1.0), (33, 33, 1))
    field = sample_potential(TransversePlaneWave(), grid, 0.0)
    assert find_disclinations(field, 0) == []


def test_pattern_rotation_rate_examples():
    model = DisclinationModel(WaveParams.with_dispersion(k=1.0))
    assert pattern_rotation_rate(model, 0.5, 0.5) == 0.0

    fast = DisclinationModel(WaveParams(k=1.0, omega=TWO_PI))
    rate = pattern_rotation_rate(fast, 0.0, 0.25)
    assert rate == pytest.approx(math.pi, abs=1e-9)  # alpha = pi/4 over 0.25

    four = DisclinationModel(WaveParams(k=1.0, omega=4.0))
    assert pattern_rotation_rate(four, 0.0, 0.5) == pytest.approx(2.0, abs=1e-9)

    with pytest.raises(ValueError):
        pattern_rotation_rate(model, 0.0, 1.0, n_theta=8)


def test_axial_twist_examples():
    model = DisclinationModel(WaveParams.with_dispersion(k=1.0))
    assert axial_twist_per_length(model, 1.0, 1.0, 0.0) == 0.0
    # k=1 over one wavelength: total twist magnitude pi
    lam = TWO_PI
    rate = axial_twist_per_length(model, 0.0, lam, 0.0)
    assert abs(rate) * lam == pytest.approx(math.pi, abs=1e-9)

    two = DisclinationModel(WaveParams.with_dispersion(k=2.0))
    rate = axial_twist_per_length(two, 0.0, math.pi / 2, 0.0)
    assert abs(rate) * (math.pi / 2) == pytest.approx(math.pi / 2, abs=1e-9)
    assert rate == pytest.approx(-1.0, abs=1e-9)  # signed: -k/2


def test_rotation_twist_consistency():
    for k, c in ((1.0, 1.0), (2.0, 0.7), (0.5, 3.0)):
        model = DisclinationModel(WaveParams.with_dispersion(k=k, c=c))
        omega = model.params.omega
        rot = pattern_rotation_rate(model, 0.0, 0.3 * TWO_PI / omega)
        twist = axial_twist_per_length(model, 0.0, 0.3 * TWO_PI / k, 0.0)
        assert rot / twist == pytest.approx(-c, rel=1e-9)


def test_tifold_index_examples():
    model = DisclinationModel(WaveParams.with_dispersion(k=1.0))
    frac, residual = tifold_index(model, full_output=True)
    assert frac == Fraction(1, 2)
    assert residual <= 1e-6

    with pytest.raises(UndefinedIndexError):
        tifold_index(DisclinationModel(WaveParams(k=1.0, omega=0.0)))

    # scaling omega off shell does not change the index
    off = DisclinationModel(WaveParams(k=1.0, omega=10.0))
    assert tifold_index(off) == Fraction(1, 2)


def test_tifold_non_rational_reports_raw_value():
    class Skewed(DisclinationModel):
        """Pattern rotating at 0.37*omega instead of omega/2."""

        def components(self, x, y, z, t):
            p = self.params
            w = np.asarray(x, dtype=np.complex128) + 1j * np.asarray(y)
            carrier = np.exp(1j * (p.k * np.asarray(z) - 0.74 * p.omega * t))
            ax = p.a * w * carrier
            return (ax, 1j * ax, 0.0 * ax, 0.0 * ax)

    model = Skewed(WaveParams.with_dispersion(k=1.0))
    with pytest.raises(NonRationalIndexError) as err:
        tifold_index(model)
    assert err.value.raw == pytest.approx(0.37, abs=1e-6)
