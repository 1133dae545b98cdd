"""Mode lattice basis functions and the site/mode unitary transform.

A spectral window holds N equally spaced wavenumber offsets kappa_m = 2*pi*m/L
around a carrier k_center, with lattice constant l = L/N.  Plane-wave modes
chi_m(z) and the localized Dirichlet-kernel functions w_s(z) are related by the
DFT-like unitary C_sm = exp(2*pi*i*s*m/N)/sqrt(N).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SpectralWindow",
    "SiteIndexSet",
    "chi",
    "w_site",
    "transform_matrix",
    "to_site_amplitudes",
    "to_mode_amplitudes",
]


@dataclass(frozen=True)
class SpectralWindow:
    """A portion of k-space: N modes spaced 2*pi/L around k_center."""

    k_center: float
    lattice_const: float
    n_modes: int

    def __post_init__(self):
        if self.n_modes < 1 or self.n_modes % 2 == 0:
            raise ValueError(f"n_modes must be odd and >= 1, got {self.n_modes}")
        if self.lattice_const <= 0:
            raise ValueError(f"lattice_const must be positive, got {self.lattice_const}")

    @property
    def quant_length(self) -> float:
        return self.n_modes * self.lattice_const

    @property
    def half_range(self) -> int:
        """n = (N - 1) / 2; modes and sites run over -n..n."""
        return (self.n_modes - 1) // 2

    def mode_indices(self) -> np.ndarray:
        n = self.half_range
        return np.arange(-n, n + 1)

    def kappa(self, m) -> np.ndarray | float:
        """Wavenumber offset(s) 2*pi*m/L; |kappa_m| < pi/l for |m| <= n."""
        return 2.0 * np.pi * np.asarray(m) / self.quant_length

    def wavenumbers(self) -> np.ndarray:
        """Absolute wavenumbers k_center + kappa_m for m = -n..n."""
        return self.k_center + self.kappa(self.mode_indices())


@dataclass(frozen=True)
class SiteIndexSet:
    """Consecutive pulse-site indices (the full window -n..n or a subset)."""

    sites: tuple = field(default=())

    def __post_init__(self):
        s = tuple(int(v) for v in self.sites)
        if len(s) == 0:
            raise ValueError("site set must be nonempty")
        if any(b - a != 1 for a, b in zip(s, s[1:])):
            raise ValueError("site indices must be consecutive")
        object.__setattr__(self, "sites", s)

    def __len__(self) -> int:
        return len(self.sites)

    def as_array(self) -> np.ndarray:
        return np.array(self.sites)

    @classmethod
    def full(cls, window: SpectralWindow) -> "SiteIndexSet":
        n = window.half_range
        return cls(tuple(range(-n, n + 1)))

    @classmethod
    def centered(cls, count: int) -> "SiteIndexSet":
        if count < 1:
            raise ValueError(f"site count must be >= 1, got {count}")
        lo = -(count // 2)
        return cls(tuple(range(lo, lo + count)))


def _check_mode_index(window: SpectralWindow, m: int):
    if abs(m) > window.half_range:
        raise IndexError(
            f"mode index {m} outside window range -{window.half_range}..{window.half_range}"
        )


def chi(window: SpectralWindow, m: int, z):
    """Plane-wave envelope mode chi_m(z) = exp(i*kappa_m*z)/sqrt(L)."""
    _check_mode_index(window, m)
    L = window.quant_length
    kappa_m = 2.0 * np.pi * m / L
    return np.exp(1j * kappa_m * np.asarray(z, dtype=float)) / np.sqrt(L)


def w_site(window: SpectralWindow, s: int, z):
    """Localized Dirichlet-kernel function w_s(z) = w(z - s*l).

    w(z) = sin(pi*z/l) / (sqrt(N*L) * sin(pi*z/L)), with the removable
    singularities at z = 0, +-L, ... evaluated via the derivative ratio
    N*cos(pi*z/l)/cos(pi*z/L), which equals N there (N odd).
    """
    N = window.n_modes
    L = window.quant_length
    l = window.lattice_const
    u = np.asarray(z, dtype=float) - s * l
    num = np.sin(np.pi * u / l)
    den = np.sin(np.pi * u / L)
    singular = np.abs(den) < 1e-9
    # derivative-ratio limit where the denominator vanishes
    safe_den = np.where(singular, 1.0, den)
    ratio = np.where(
        singular,
        N * np.cos(np.pi * u / l) / np.cos(np.pi * u / L),
        num / safe_den,
    )
    out = ratio / np.sqrt(N * L)
    return float(out) if np.isscalar(z) else out


def transform_matrix(window: SpectralWindow) -> np.ndarray:
    """Unitary C with C[s+n, m+n] = exp(2*pi*i*s*m/N)/sqrt(N), s,m = -n..n."""
    N = window.n_modes
    idx = window.mode_indices()
    phase = np.outer(idx, idx)  # s*m
    return np.exp(2j * np.pi * phase / N) / np.sqrt(N)


def to_site_amplitudes(C: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Map monochromatic amplitudes to pulse-site amplitudes, gamma = C @ alpha."""
    alpha = np.asarray(alpha)
    if C.shape[1] != alpha.shape[0]:
        raise ValueError(f"dimension mismatch: C is {C.shape}, alpha has {alpha.shape[0]}")
    return C @ alpha


def to_mode_amplitudes(C: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_site_amplitudes`: alpha = C^dagger @ gamma."""
    gamma = np.asarray(gamma)
    if C.shape[0] != gamma.shape[0]:
        raise ValueError(f"dimension mismatch: C is {C.shape}, gamma has {gamma.shape[0]}")
    return C.conj().T @ gamma
