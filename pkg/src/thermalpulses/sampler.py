"""Diagonalization of the Gaussian kernel and pulse-set sampling.

A pulse set is one term of the mixture: complex amplitudes gamma_bar_s on the
site subset, with physical amplitudes gamma_s = gamma_bar_s * exp(-Gamma).
Typical sets put every eigen-coordinate magnitude at the mode of its marginal,
|eta_r| = 1/sqrt(2*theta_r), with independent uniform phases; fully random
sets draw eta from the exact Gaussian density exp(-sum theta_r |eta_r|^2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .thermal import GammaValue, LambdaMatrix

__all__ = [
    "EigenSystem",
    "EtaVector",
    "PulseSet",
    "diagonalize",
    "typical_pulse_set",
    "atypical_pulse_set",
    "random_pulse_set",
]


@dataclass(frozen=True)
class EigenSystem:
    """Unitary U and eigenvalues theta of Lambda: U^dag Lambda U = diag(theta).

    theta is sorted ascending and each column of U is phase-fixed so its
    largest-magnitude entry is real and positive.
    """

    U: np.ndarray
    theta: np.ndarray
    source: LambdaMatrix


@dataclass(frozen=True)
class EtaVector:
    """Eigen-coordinates eta_r = sum_s U_sr gamma_bar_s and their phases."""

    eta: np.ndarray
    phases: np.ndarray


@dataclass(frozen=True)
class PulseSet:
    """One pulse set |{gamma_bar e^{-Gamma}}> of the mixture."""

    gamma_bar: np.ndarray
    gamma_scale: GammaValue
    sites: tuple
    seed: int | None
    likelihood_exponent: float

    @property
    def gamma(self) -> np.ndarray:
        """Physical amplitudes gamma_s = gamma_bar_s * exp(-Gamma)."""
        return self.gamma_bar * self.gamma_scale.scale

    def to_json_dict(self) -> dict:
        return {
            "sites": list(self.sites),
            "gamma_bar": [[float(v.real), float(v.imag)] for v in self.gamma_bar],
            "gamma_scale": self.gamma_scale.gamma,
            "seed": self.seed,
            "likelihood_exponent": self.likelihood_exponent,
        }

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=2)
            f.write("\n")

    @classmethod
    def from_json_dict(cls, d: dict) -> "PulseSet":
        gb = np.array([complex(re, im) for re, im in d["gamma_bar"]])
        return cls(
            gamma_bar=gb,
            gamma_scale=GammaValue(d["gamma_scale"]),
            sites=tuple(d["sites"]),
            seed=d.get("seed"),
            likelihood_exponent=d["likelihood_exponent"],
        )

    @classmethod
    def load(cls, path) -> "PulseSet":
        with open(path) as f:
            return cls.from_json_dict(json.load(f))


def diagonalize(lam: LambdaMatrix) -> EigenSystem:
    """Eigendecomposition of Lambda with a deterministic ordering and phase.

    Raises if the input fails Hermiticity beyond 1e-10 of its norm or is not
    positive definite.
    """
    M = lam.entries
    scale = np.abs(M).max()
    if np.abs(M - M.conj().T).max() > 1e-10 * scale:
        raise ValueError("Lambda is not Hermitian within tolerance")
    theta, U = np.linalg.eigh(M)
    if theta[0] <= 0:
        raise ValueError(f"Lambda is not positive definite (min eigenvalue {theta[0]:g})")
    # phase-fix: largest-magnitude entry of each column real positive
    lead = np.argmax(np.abs(U), axis=0)
    phase = U[lead, np.arange(U.shape[1])]
    U = U * (np.abs(phase) / phase)[None, :]
    return EigenSystem(U=U, theta=theta, source=lam)


def _assemble(eig: EigenSystem, gamma: GammaValue, eta: np.ndarray, seed) -> PulseSet:
    gamma_bar = eig.U.conj() @ eta
    exponent = float(np.real(np.sum(eig.theta * np.abs(eta) ** 2)))
    return PulseSet(
        gamma_bar=gamma_bar,
        gamma_scale=gamma,
        sites=eig.source.sites.sites,
        seed=None if seed is None else int(seed),
        likelihood_exponent=exponent,
    )


def typical_pulse_set(eig: EigenSystem, gamma: GammaValue, rng_seed: int) -> PulseSet:
    """Draw a maximally likely pulse set: |eta_r| = 1/sqrt(2*theta_r), random phases."""
    if np.any(eig.theta <= 0):
        raise ValueError("all eigenvalues must be positive")
    rng = np.random.default_rng(rng_seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=len(eig.theta))
    eta = np.exp(1j * phases) / np.sqrt(2.0 * eig.theta)
    return _assemble(eig, gamma, eta, rng_seed)


def atypical_pulse_set(
    eig: EigenSystem, gamma: GammaValue, magnitudes, rng_seed: int
) -> PulseSet:
    """As :func:`typical_pulse_set` but with user-supplied |eta_r|."""
    magnitudes = np.asarray(magnitudes, dtype=float)
    if magnitudes.shape != eig.theta.shape:
        raise ValueError("magnitudes length does not match eigenvalue count")
    if np.any(magnitudes < 0):
        raise ValueError("magnitudes must be nonnegative")
    rng = np.random.default_rng(rng_seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=len(eig.theta))
    eta = magnitudes * np.exp(1j * phases)
    return _assemble(eig, gamma, eta, rng_seed)


def random_pulse_set(eig: EigenSystem, gamma: GammaValue, rng_seed: int) -> PulseSet:
    """Draw gamma_bar from the exact Gaussian density of the mixture.

    In eigen-coordinates the density factorizes: |eta_r|^2 is exponential
    with mean 1/theta_r and the phase is uniform.
    """
    if np.any(eig.theta <= 0):
        raise ValueError("all eigenvalues must be positive")
    rng = np.random.default_rng(rng_seed)
    eta = _draw_eta(rng, eig.theta, 1)[0]
    return _assemble(eig, gamma, eta, rng_seed)


def _draw_eta(rng: np.random.Generator, theta: np.ndarray, count: int) -> np.ndarray:
    """count x len(theta) matrix of independent eta draws from the Gaussian."""
    mag2 = rng.exponential(scale=1.0 / theta, size=(count, len(theta)))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(count, len(theta)))
    return np.sqrt(mag2) * np.exp(1j * phases)
