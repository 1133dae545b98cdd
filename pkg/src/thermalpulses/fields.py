"""Mean displacement-field envelopes of pulses and pulse sets.

In the narrowband limit each pulse carries the sinc-shaped empty-lattice
Wannier profile W(z - s*l); the transverse prefactor is set to 1 so envelopes
are the scalar z-dependence of the positive-frequency field term.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .modes import SpectralWindow
from .sampler import PulseSet
from .thermal import ThermalContext, mean_occupation

__all__ = [
    "FieldGrid",
    "FieldProfile",
    "wannier",
    "single_pulse_field",
    "pulse_set_field",
    "planck_weight",
    "sinc_prefactor",
]

# |W(z)| has fallen to half its peak where sinc(x) = 1/2, x ~ 1.89549;
# the resulting full width is ~1.2067 * l.
PREFACTOR_PAPER = "paper"  # 2*pi/sqrt(l)
PREFACTOR_NORMALIZED = "normalized"  # 1/sqrt(l), the L -> infinity limit of w(z)


@dataclass(frozen=True)
class FieldGrid:
    """Uniform spatial grid with an optional carrier factor e^{i*k_center*z}."""

    z_min: float
    z_max: float
    n_points: int
    include_carrier: bool = False

    def __post_init__(self):
        if self.z_min >= self.z_max:
            raise ValueError("z_min must be less than z_max")
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")

    def points(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.n_points)


@dataclass(frozen=True)
class FieldProfile:
    """Positive-frequency envelope sampled on a grid."""

    z: np.ndarray
    envelope: np.ndarray

    def __post_init__(self):
        if len(self.z) != len(self.envelope):
            raise ValueError("z and envelope lengths differ")

    def save_csv(self, path):
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["z", "re_envelope", "im_envelope", "abs_envelope"])
            for z, e in zip(self.z, self.envelope):
                writer.writerow([repr(float(z)), repr(float(e.real)), repr(float(e.imag)), repr(float(abs(e)))])

    def save_json(self, path, metadata: dict | None = None):
        payload = {
            "metadata": metadata or {},
            "z": [float(v) for v in self.z],
            "envelope": [[float(e.real), float(e.imag)] for e in self.envelope],
        }
        with open(path, "w") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")


def sinc_prefactor(lattice_const: float, convention: str = PREFACTOR_PAPER) -> float:
    if convention == PREFACTOR_PAPER:
        return 2.0 * np.pi / np.sqrt(lattice_const)
    if convention == PREFACTOR_NORMALIZED:
        return 1.0 / np.sqrt(lattice_const)
    raise ValueError(f"unknown prefactor convention {convention!r}")


def wannier(window: SpectralWindow, s: int, z, prefactor: str = PREFACTOR_PAPER):
    """Empty-lattice Wannier profile: prefactor * sinc(pi*(z - s*l)/l)."""
    l = window.lattice_const
    u = (np.asarray(z, dtype=float) - s * l) / l
    out = sinc_prefactor(l, prefactor) * np.sinc(u)
    return float(out) if np.isscalar(z) else out


def single_pulse_field(
    pulse: PulseSet,
    s: int,
    grid: FieldGrid,
    window: SpectralWindow,
    prefactor: str = PREFACTOR_PAPER,
) -> FieldProfile:
    """Envelope of one pulse: gamma_bar_s e^{-Gamma} W_s(z), optionally with carrier."""
    if s not in pulse.sites:
        raise IndexError(f"site {s} not in pulse set {pulse.sites}")
    z = grid.points()
    amp = pulse.gamma_bar[pulse.sites.index(s)] * pulse.gamma_scale.scale
    env = amp * wannier(window, s, z, prefactor)
    if grid.include_carrier:
        env = env * np.exp(1j * window.k_center * z)
    return FieldProfile(z=z, envelope=env)


def pulse_set_field(
    pulse: PulseSet,
    grid: FieldGrid,
    window: SpectralWindow,
    prefactor: str = PREFACTOR_PAPER,
) -> FieldProfile:
    """Envelope of the whole set: sum_s gamma_bar_s e^{-Gamma} W_s(z)."""
    z = grid.points()
    sites = np.array(pulse.sites)
    l = window.lattice_const
    basis = np.sinc((z[None, :] - sites[:, None] * l) / l)
    amps = pulse.gamma_bar * pulse.gamma_scale.scale
    env = sinc_prefactor(l, prefactor) * (amps @ basis)
    if grid.include_carrier:
        env = env * np.exp(1j * window.k_center * z)
    return FieldProfile(z=z, envelope=env)


def planck_weight(ctx: ThermalContext, k):
    """Thermal energy per mode, hbar*omega(k)/(e^{beta*hbar*omega(k)} - 1)."""
    return ctx.hbar * ctx.dispersion.omega(k) * mean_occupation(ctx, k)
