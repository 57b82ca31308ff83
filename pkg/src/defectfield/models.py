"""Closed-form wave-field generators with exact analytic derivatives.

Two families are covered: complex scalar waves carrying a screw
dislocation (an amplitude zero with quantized phase winding), and
four-component potentials (Ax, Ay, Az, Phi) including the pure screw
disclination, whose transverse vector direction is indeterminate on the
propagation axis. Every model evaluates at arbitrary space-time points
and broadcasts over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import SpaceTimePoint

ON_SHELL_RTOL = 1e-12


class UnsupportedModelError(TypeError):
    """The model lacks an analytic derivative required by the operation."""


class IndeterminateAzimuthError(ValueError):
    """The real transverse vector vanishes, so its direction is undefined."""


@dataclass(frozen=True)
class WaveParams:
    """Wavenumber, frequency, speed and amplitudes of a propagating wave.

    ``a`` is the transverse amplitude coefficient and defaults to ``k``,
    reproducing the literal disclination formula while allowing the
    amplitude to be scaled independently of the wavenumber. ``az`` scales
    the axial component. Construction does not force ``omega = k*c``;
    operations that need the dispersion relation check ``on_shell``.
    """

    k: float
    omega: float
    c: float = 1.0
    a: float | None = None
    az: complex = 1.0 + 0.0j

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError("k must be positive and finite")
        if not (math.isfinite(self.omega) and self.omega >= 0):
            raise ValueError("omega must be nonnegative and finite")
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError("c must be positive and finite")
        object.__setattr__(self, "a", float(self.k if self.a is None else self.a))
        object.__setattr__(self, "az", complex(self.az))

    @property
    def on_shell(self) -> bool:
        return abs(self.omega - self.k * self.c) <= ON_SHELL_RTOL * self.omega

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k

    @classmethod
    def with_dispersion(cls, k: float, c: float = 1.0, a: float | None = None,
                        az: complex = 1.0 + 0.0j) -> "WaveParams":
        return cls(k=k, omega=k * c, c=c, a=a, az=az)


def phase_chi(params: WaveParams, point: SpaceTimePoint) -> float:
    """Combined phase theta + k*z - omega*t, not reduced modulo 2*pi."""
    return point.theta + params.k * point.z - params.omega * point.t


def azimuth_beta(ax, ay):
    """Direction angle in (-pi, pi] of the real transverse vector (Re Ax, Re Ay)."""
    rx = np.real(ax)
    ry = np.real(ay)
    if np.any((rx == 0) & (ry == 0)):
        raise IndeterminateAzimuthError("real transverse vector is zero")
    b = np.arctan2(ry, rx)
    b = np.where(b == -np.pi, np.pi, b)
    return float(b) if np.isscalar(ax) or np.ndim(ax) == 0 else b


class ScalarModel:
    """Base for complex scalar wave models."""

    def value(self, x, y, z, t):
        raise NotImplementedError

    def time_derivative(self, x, y, z, t):
        raise UnsupportedModelError(f"{type(self).__name__} has no analytic time derivative")

    def second_time_derivative(self, x, y, z, t):
        raise UnsupportedModelError(f"{type(self).__name__} has no analytic second time derivative")

    def gradient(self, x, y, z, t):
        raise UnsupportedModelError(f"{type(self).__name__} has no analytic gradient")


class TimeHarmonicScalar(ScalarModel):
    """Scalar model of the separable form S(x, y, z) * exp(-i*omega*t)."""

    omega: float = 0.0

    def spatial(self, x, y, z):
        raise NotImplementedError

    def spatial_gradient(self, x, y, z):
        raise NotImplementedError

    def _phase(self, t):
        return np.exp(-1j * self.omega * t)

    def value(self, x, y, z, t):
        return self.spatial(x, y, z) * self._phase(t)

    def time_derivative(self, x, y, z, t):
        return -1j * self.omega * self.value(x, y, z, t)

    def second_time_derivative(self, x, y, z, t):
        return -(self.omega ** 2) * self.value(x, y, z, t)

    def gradient(self, x, y, z, t):
        ph = self._phase(t)
        gx, gy, gz = self.spatial_gradient(x, y, z)
        return (gx * ph, gy * ph, gz * ph)


@dataclass(frozen=True)
class ConstantScalar(TimeHarmonicScalar):
    """Spatially and temporally constant complex value."""

    value0: complex = 1.0 + 0.0j
    omega: float = 0.0

    def spatial(self, x, y, z):
        return self.value0 + 0.0 * np.asarray(x, dtype=np.complex128)

    def spatial_gradient(self, x, y, z):
        zero = 0.0 * np.asarray(x, dtype=np.complex128)
        return (zero, zero.copy(), zero.copy())


@dataclass(frozen=True)
class PlaneWaveModel(TimeHarmonicScalar):
    """amplitude * exp(i*(kvec . r - omega*t)); kvec may be zero (pure oscillation)."""

    kvec: tuple[float, float, float] = (0.0, 0.0, 1.0)
    omega: float = 1.0
    amplitude: complex = 1.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "kvec", tuple(float(v) for v in self.kvec))
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @property
    def c(self) -> float:
        knorm = math.sqrt(sum(v * v for v in self.kvec))
        if knorm == 0:
            raise ValueError("wave speed undefined for kvec = 0")
        return self.omega / knorm

    def spatial(self, x, y, z):
        kx, ky, kz = self.kvec
        return self.amplitude * np.exp(1j * (kx * np.asarray(x) + ky * np.asarray(y) + kz * np.asarray(z)))

    def spatial_gradient(self, x, y, z):
        v = self.spatial(x, y, z)
        kx, ky, kz = self.kvec
        return (1j * kx * v, 1j * ky * v, 1j * kz * v)


@dataclass(frozen=True)
class DislocationModel(TimeHarmonicScalar):
    """Screw dislocation: a * r^|n| * exp(i*(n*theta + k*z - omega*t)).

    The amplitude vanishes on the z axis and the phase winds n times
    around it. Written as a * w^|n| * exp(i*(k*z - omega*t)) with
    w = x + i*sign(n)*y, which also supplies an exact polynomial gradient.
    """

    n: int = 1
    k: float = 1.0
    omega: float = 1.0
    a: float = 1.0

    def __post_init__(self):
        if self.n == 0 or self.n != int(self.n):
            raise ValueError("topological charge n must be a nonzero integer")
        if self.k < 0 or self.omega < 0:
            raise ValueError("k and omega must be nonnegative")
        object.__setattr__(self, "n", int(self.n))

    def _w(self, x, y):
        sign = 1.0 if self.n > 0 else -1.0
        return np.asarray(x, dtype=np.complex128) + 1j * sign * np.asarray(y)

    def spatial(self, x, y, z):
        w = self._w(x, y)
        return self.a * w ** abs(self.n) * np.exp(1j * self.k * np.asarray(z))

    def spatial_gradient(self, x, y, z):
        m = abs(self.n)
        w = self._w(x, y)
        axial = np.exp(1j * self.k * np.asarray(z))
        dw = self.a * m * w ** (m - 1) * axial
        sign = 1.0 if self.n > 0 else -1.0
        gz = 1j * self.k * self.a * w ** m * axial
        return (dw, 1j * sign * dw, gz)


@dataclass(frozen=True)
class ProductSineModel(TimeHarmonicScalar):
    """a * sin(qx*x) * sin(qy*y) * exp(i*(kz*z - omega*t)): a separable standing pattern."""

    qx: float = 1.0
    qy: float = 1.0
    kz: float = 1.0
    omega: float = 1.0
    a: float = 1.0

    def spatial(self, x, y, z):
        return (
            self.a
            * np.sin(self.qx * np.asarray(x))
            * np.sin(self.qy * np.asarray(y))
            * np.exp(1j * self.kz * np.asarray(z))
        )

    def spatial_gradient(self, x, y, z):
        sx = np.sin(self.qx * np.asarray(x))
        sy = np.sin(self.qy * np.asarray(y))
        cx = np.cos(self.qx * np.asarray(x))
        cy = np.cos(self.qy * np.asarray(y))
        axial = np.exp(1j * self.kz * np.asarray(z))
        return (
            self.a * self.qx * cx * sy * axial,
            self.a * self.qy * sx * cy * axial,
            1j * self.kz * self.a * sx * sy * axial,
        )


class PotentialModel:
    """Base for four-component potential models (Ax, Ay, Az, Phi)."""

    c: float = 1.0

    def components(self, x, y, z, t):
        raise NotImplementedError

    def components_time_derivative(self, x, y, z, t):
        raise UnsupportedModelError(f"{type(self).__name__} has no analytic time derivative")

    def components_second_time_derivative(self, x, y, z, t):
        raise UnsupportedModelError(f"{type(self).__name__} has no analytic second time derivative")


@dataclass(frozen=True)
class DisclinationModel(PotentialModel):
    """Pure screw disclination of the transverse potential.

    Ax = a*r*exp(i*chi), Ay = i*Ax with chi = theta + k*z - omega*t, so the
    transverse zero line is the z axis. The axial pair is the simplest one
    satisfying dAz/dz + (1/c) dPhi/dt = 0 identically:
    Az = az*exp(i*(k*z - omega*t)), Phi = (k*c/omega)*Az.
    """

    params: WaveParams

    @property
    def c(self) -> float:
        return self.params.c

    def components(self, x, y, z, t):
        p = self.params
        if p.omega == 0:
            raise ValueError("disclination components undefined for omega = 0")
        w = np.asarray(x, dtype=np.complex128) + 1j * np.asarray(y)
        axial = np.exp(1j * (p.k * np.asarray(z) - p.omega * t))
        ax = p.a * w * axial
        az = p.az * axial
        phi = (p.k * p.c / p.omega) * az
        return (ax, 1j * ax, az, phi)

    def components_time_derivative(self, x, y, z, t):
        f = -1j * self.params.omega
        return tuple(f * comp for comp in self.components(x, y, z, t))

    def components_second_time_derivative(self, x, y, z, t):
        f = -(self.params.omega ** 2)
        return tuple(f * comp for comp in self.components(x, y, z, t))


@dataclass(frozen=True)
class PureGaugeModel(PotentialModel):
    """Potentials A = grad(psi), Phi = -(1/c) dpsi/dt built from a scalar model.

    By construction the derived electric and magnetic fields vanish
    identically, and the gauge-condition residual of the pair equals the
    wave operator applied to psi.
    """

    psi: ScalarModel
    c: float = 1.0

    def __post_init__(self):
        for method in ("gradient", "time_derivative"):
            try:
                getattr(self.psi, method)(0.0, 0.0, 0.0, 0.0)
            except UnsupportedModelError:
                raise UnsupportedModelError(
                    f"pure gauge requires a scalar model with analytic {method}"
                )
            except NotImplementedError:
                raise UnsupportedModelError(
                    f"pure gauge requires an evaluable scalar model with {method}"
                )

    def components(self, x, y, z, t):
        gx, gy, gz = self.psi.gradient(x, y, z, t)
        phi = -self.psi.time_derivative(x, y, z, t) / self.c
        return (gx, gy, gz, phi)

    def _omega(self) -> float:
        omega = getattr(self.psi, "omega", None)
        if omega is None:
            raise UnsupportedModelError("time derivatives need a time-harmonic scalar model")
        return omega

    def components_time_derivative(self, x, y, z, t):
        f = -1j * self._omega()
        return tuple(f * comp for comp in self.components(x, y, z, t))

    def components_second_time_derivative(self, x, y, z, t):
        f = -(self._omega() ** 2)
        return tuple(f * comp for comp in self.components(x, y, z, t))


@dataclass(frozen=True)
class RigidRotationPotential(PotentialModel):
    """Static A = (-y*b0/2, x*b0/2, 0), Phi = 0; its curl is (0, 0, b0)."""

    b0: float = 1.0

    def components(self, x, y, z, t):
        zero = 0.0 * np.asarray(x, dtype=np.complex128)
        return (-np.asarray(y) * self.b0 / 2 + zero, np.asarray(x) * self.b0 / 2 + zero,
                zero, zero.copy())

    def components_time_derivative(self, x, y, z, t):
        zero = 0.0 * np.asarray(x, dtype=np.complex128)
        return (zero, zero.copy(), zero.copy(), zero.copy())

    components_second_time_derivative = components_time_derivative


@dataclass(frozen=True)
class ConstantPotential(PotentialModel):
    """Spatially and temporally constant components."""

    ax: complex = 0.0
    ay: complex = 0.0
    az: complex = 0.0
    phi: complex = 0.0

    def components(self, x, y, z, t):
        zero = 0.0 * np.asarray(x, dtype=np.complex128)
        return (self.ax + zero, self.ay + zero, self.az + zero, self.phi + zero)

    def components_time_derivative(self, x, y, z, t):
        zero = 0.0 * np.asarray(x, dtype=np.complex128)
        return (zero, zero.copy(), zero.copy(), zero.copy())

    components_second_time_derivative = components_time_derivative


class ZeroScalarPotential(PotentialModel):
    """Wrapper forcing Phi = 0 while keeping the vector part of a model."""

    def __init__(self, inner: PotentialModel):
        self.inner = inner
        self.c = inner.c

    def _zeroed(self, comps):
        ax, ay, az, _ = comps
        return (ax, ay, az, 0.0 * np.asarray(ax))

    def components(self, x, y, z, t):
        return self._zeroed(self.inner.components(x, y, z, t))

    def components_time_derivative(self, x, y, z, t):
        return self._zeroed(self.inner.components_time_derivative(x, y, z, t))

    def components_second_time_derivative(self, x, y, z, t):
        return self._zeroed(self.inner.components_second_time_derivative(x, y, z, t))


def strip_scalar_potential(model: PotentialModel) -> ZeroScalarPotential:
    """Return the model with its scalar potential forced to zero (a broken gauge pair)."""
    return ZeroScalarPotential(model)


def eval_disclination(model: DisclinationModel, point: SpaceTimePoint, t: float):
    """Disclination components at a single point; returns (Ax, Ay, Az, Phi)."""
    return tuple(
        complex(v) for v in model.components(point.x, point.y, point.z, t)
    )


def eval_dislocation(model: DislocationModel, point: SpaceTimePoint, t: float) -> complex:
    """Dislocation value at a single point."""
    return complex(model.value(point.x, point.y, point.z, t))


def pure_gauge_from_scalar(psi: ScalarModel, point: SpaceTimePoint, t: float,
                           c: float = 1.0):
    """(Ax, Ay, Az, Phi) of the pure-gauge pair generated by psi, at one point."""
    gauge = PureGaugeModel(psi, c=c)
    return tuple(complex(v) for v in gauge.components(point.x, point.y, point.z, t))


def _complex_to_json(v: complex):
    return [float(np.real(v)), float(np.imag(v))]


def _complex_from_json(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def model_to_descriptor(model) -> dict:
    """JSON-serializable descriptor for a model; inverse of model_from_descriptor."""
    if isinstance(model, DisclinationModel):
        p = model.params
        return {"model": "disclination", "k": p.k, "omega": p.omega, "c": p.c,
                "a": p.a, "az": _complex_to_json(p.az)}
    if isinstance(model, DislocationModel):
        return {"model": "dislocation", "n": model.n, "k": model.k,
                "omega": model.omega, "a": model.a}
    if isinstance(model, PlaneWaveModel):
        return {"model": "plane_wave", "kvec": list(model.kvec), "omega": model.omega,
                "amplitude": _complex_to_json(model.amplitude)}
    if isinstance(model, ProductSineModel):
        return {"model": "product_sine", "qx": model.qx, "qy": model.qy,
                "kz": model.kz, "omega": model.omega, "a": model.a}
    if isinstance(model, ConstantScalar):
        return {"model": "constant", "value": _complex_to_json(model.value0)}
    if isinstance(model, PureGaugeModel):
        return {"model": "pure_gauge", "c": model.c,
                "psi": model_to_descriptor(model.psi)}
    raise ValueError(f"no descriptor form for {type(model).__name__}")


def model_from_descriptor(descriptor: dict):
    """Build a model from its JSON descriptor. Raises ValueError on bad input."""
    if not isinstance(descriptor, dict) or "model" not in descriptor:
        raise ValueError("descriptor must be an object with a 'model' key")
    kind = descriptor["model"]
    d = {k: v for k, v in descriptor.items() if k != "model"}
    try:
        if kind == "disclination":
            k = float(d.pop("k"))
            c = float(d.pop("c", 1.0))
            omega = float(d.pop("omega", k * c))
            a = d.pop("a", None)
            az = _complex_from_json(d.pop("az", 1.0))
            params = WaveParams(k=k, omega=omega, c=c,
                                a=None if a is None else float(a), az=az)
            model = DisclinationModel(params)
        elif kind == "dislocation":
            model = DislocationModel(n=int(d.pop("n")), k=float(d.pop("k", 1.0)),
                                     omega=float(d.pop("omega", 1.0)),
                                     a=float(d.pop("a", 1.0)))
        elif kind == "plane_wave":
            kvec = d.pop("kvec", [0.0, 0.0, 1.0])
            model = PlaneWaveModel(kvec=tuple(float(v) for v in kvec),
                                   omega=float(d.pop("omega", 1.0)),
                                   amplitude=_complex_from_json(d.pop("amplitude", 1.0)))
        elif kind == "product_sine":
            model = ProductSineModel(qx=float(d.pop("qx", 1.0)), qy=float(d.pop("qy", 1.0)),
                                     kz=float(d.pop("kz", 1.0)), omega=float(d.pop("omega", 1.0)),
                                     a=float(d.pop("a", 1.0)))
        elif kind == "constant":
            model = ConstantScalar(value0=_complex_from_json(d.pop("value", 1.0)))
        elif kind == "pure_gauge":
            psi = model_from_descriptor(d.pop("psi"))
            if not isinstance(psi, ScalarModel):
                raise ValueError("pure_gauge psi must be a scalar model")
            model = PureGaugeModel(psi=psi, c=float(d.pop("c", 1.0)))
        else:
            raise ValueError(f"unknown model kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"invalid {kind!r} descriptor: {exc}") from exc
    if d:
        raise ValueError(f"unknown descriptor keys for {kind!r}: {sorted(d)}")
    return model
