"""Photon bookkeeping: frequency, wavenumber, energies, and momentum.

Quantities live in one of two unit systems: geometric (h = c = 1) or SI.
The internal energy is half of h*nu, the translational energy is the
remainder, so the two halves are exactly equal and sum to h*nu; the
momentum magnitude is h*nu/c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class UnitSystem:
    name: str
    h: float
    c: float


GEOMETRIC = UnitSystem("geometric", 1.0, 1.0)
SI = UnitSystem("si", 6.62607015e-34, 2.99792458e8)

UNIT_SYSTEMS = {"geometric": GEOMETRIC, "si": SI}


@dataclass(frozen=True)
class PhotonLedger:
    """Frequency nu (and optionally wavenumber k) in a chosen unit system.

    tau = 1/nu is the associated discrete time interval and omega = 2*pi*nu
    the angular frequency. nu = 0 is accepted as the degenerate limit where
    every energy vanishes.
    """

    nu: float
    k: float | None = None
    units: UnitSystem = GEOMETRIC

    def __post_init__(self):
        if not (math.isfinite(self.nu) and self.nu >= 0):
            raise ValueError("nu must be nonnegative and finite")
        if self.k is not None and not (math.isfinite(self.k) and self.k > 0):
            raise ValueError("k, when given, must be positive and finite")

    @property
    def tau(self) -> float:
        return math.inf if self.nu == 0 else 1.0 / self.nu

    @property
    def omega(self) -> float:
        return TWO_PI * self.nu

    @property
    def h(self) -> float:
        return self.units.h

    @property
    def c(self) -> float:
        return self.units.c

    @classmethod
    def from_frequency(cls, nu: float, units: UnitSystem = GEOMETRIC,
                       with_wavenumber: bool = False) -> "PhotonLedger":
        k = TWO_PI * nu / units.c if with_wavenumber and nu > 0 else None
        return cls(nu=nu, k=k, units=units)

    @classmethod
    def from_wavelength(cls, wavelength: float,
                        units: UnitSystem = GEOMETRIC) -> "PhotonLedger":
        if not (math.isfinite(wavelength) and wavelength > 0):
            raise ValueError("wavelength must be positive and finite")
        return cls(nu=units.c / wavelength, k=TWO_PI / wavelength, units=units)


def spin_energy(ledger: PhotonLedger) -> float:
    """Internal energy carried by the spin: half of h*nu."""
    return 0.5 * (ledger.h * ledger.nu)


def total_energy(ledger: PhotonLedger) -> tuple[float, float, float]:
    """(internal, translational, total) with total = h*nu and an exact 50/50 split."""
    total = ledger.h * ledger.nu
    internal = 0.5 * total
    translational = total - internal
    return internal, translational, total


def momentum(ledger: PhotonLedger) -> float:
    """Momentum magnitude h*nu/c, computed as total energy over c."""
    return (ledger.h * ledger.nu) / ledger.c


def dispersion_check(ledger: PhotonLedger) -> tuple[bool, float]:
    """Whether omega = k*c within 1e-12 relative, plus the relative error."""
    if ledger.k is None:
        raise ValueError("ledger has no wavenumber to check")
    if ledger.nu == 0:
        return False, math.inf
    rel = abs(ledger.omega - ledger.k * ledger.c) / ledger.omega
    return rel <= 1e-12, rel


def ledger_summary(ledger: PhotonLedger) -> dict:
    """JSON-friendly snapshot of every derived quantity."""
    internal, translational, total = total_energy(ledger)
    out = {
        "units": ledger.units.name,
        "h": ledger.h,
        "c": ledger.c,
        "nu": ledger.nu,
        "tau": None if ledger.nu == 0 else ledger.tau,
        "omega": ledger.omega,
        "k": ledger.k,
        "spin_energy": internal,
        "translational_energy": translational,
        "total_energy": total,
        "momentum": momentum(ledger),
    }
    if ledger.k is not None:
        ok, rel = dispersion_check(ledger)
        out["on_shell"] = ok
        out["dispersion_relative_error"] = rel
    return out
