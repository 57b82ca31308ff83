#!/usr/bin/env python3
"""Energy bookkeeping for the propagating defect.

The total energy h*nu splits exactly in half between the internal (spin)
part and the translational part, the momentum magnitude is h*nu/c, and
the half-turn time of the azimuth pattern equals the discrete interval
tau = 1/nu, tying the field picture to the ledger.
"""

import math

import defectfield as df

TWO_PI = 2.0 * math.pi

print("geometric units (h = c = 1), nu = 2:")
led = df.PhotonLedger(nu=2.0, k=TWO_PI * 2.0)
internal, translational, total = df.total_energy(led)
print(f"  E_internal = {internal}, E_translational = {translational}, E = {total}")
print(f"  split: E_i / E = {internal / total} (exact)")
print(f"  momentum = {df.momentum(led)}, E / momentum = {total / df.momentum(led)} (= c)")
ok, rel = df.dispersion_check(led)
print(f"  dispersion omega = k*c: {ok} (relative error {rel:.1e})")

print("\nSI units, green light nu = 5e14 Hz:")
si = df.PhotonLedger(nu=5e14, units=df.SI)
print(f"  spin energy     = {df.spin_energy(si):.6e} J")
print(f"  total energy    = {df.total_energy(si)[2]:.6e} J")
print(f"  momentum        = {df.momentum(si):.6e} kg m/s")

print("\nthe pattern half-turn takes exactly one discrete interval tau:")
nu = 0.8
led = df.PhotonLedger(nu=nu, k=TWO_PI * nu)
model = df.DisclinationModel(
    df.WaveParams.with_dispersion(k=led.k, c=led.omega / led.k))
rate = df.pattern_rotation_rate(model, 0.0, led.tau)
print(f"  nu = {nu}: tau = {led.tau:.6f}, pi / rotation rate = {math.pi / rate:.6f}")

print("\nscaling nu scales every energy linearly:")
for nu in (1.0, 2.0, 4.0):
    led = df.PhotonLedger(nu=nu)
    print(f"  nu={nu:.1f}: E_i={df.spin_energy(led):.2f}, "
          f"E={df.total_energy(led)[2]:.2f}, p={df.momentum(led):.2f}")
