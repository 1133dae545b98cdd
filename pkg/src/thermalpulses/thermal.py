"""Thermal occupation, the scale factor Gamma, and the Gaussian kernel Lambda.

Both the finite-window forms (sums over the N discrete modes) and the
infinite-length forms (quadrature over kappa in (-pi/l, pi/l]) are provided,
together with the window refinement N -> 3N, L -> 3L used to take the limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .modes import SiteIndexSet, SpectralWindow, transform_matrix

__all__ = [
    "Dispersion",
    "ThermalContext",
    "GammaValue",
    "LambdaMatrix",
    "mean_occupation",
    "gamma_discrete",
    "gamma_continuum",
    "lambda_discrete",
    "lambda_continuum",
    "refine",
]

_MODE_COUNT_LIMIT = 10**7  # refine() overflow guard


@dataclass(frozen=True)
class Dispersion:
    """Dispersion relation omega(k): linear v*|k| or a tabulated curve.

    Tabulated curves interpolate piecewise linearly and refuse to
    extrapolate outside the tabulated k range.
    """

    kind: str = "linear"
    v: float = 1.0
    k_table: np.ndarray | None = None
    omega_table: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "linear":
            if self.v <= 0:
                raise ValueError(f"linear dispersion slope must be positive, got {self.v}")
        elif self.kind == "tabulated":
            k = np.asarray(self.k_table, dtype=float)
            w = np.asarray(self.omega_table, dtype=float)
            if k.ndim != 1 or k.shape != w.shape or len(k) < 2:
                raise ValueError("tabulated dispersion needs matching 1D k and omega arrays")
            if not np.all(np.diff(k) > 0):
                raise ValueError("tabulated k values must be strictly increasing")
            if not np.all(w > 0):
                raise ValueError("tabulated omega values must be positive")
            object.__setattr__(self, "k_table", k)
            object.__setattr__(self, "omega_table", w)
        else:
            raise ValueError(f"unknown dispersion kind {self.kind!r}")

    def omega(self, k):
        k = np.asarray(k, dtype=float)
        if self.kind == "linear":
            return self.v * np.abs(k)
        if np.any(k < self.k_table[0]) or np.any(k > self.k_table[-1]):
            raise ValueError("wavenumber outside tabulated dispersion domain")
        return np.interp(k, self.k_table, self.omega_table)

    @classmethod
    def from_file(cls, path) -> "Dispersion":
        """Load a two-column (k, omega) table from plain text or CSV."""
        data = np.loadtxt(path, delimiter=None if str(path).endswith((".txt", ".dat")) else ",")
        if data.ndim != 2 or data.shape[1] != 2:
            raise ValueError(f"dispersion table {path} must have two columns (k, omega)")
        return cls(kind="tabulated", k_table=data[:, 0], omega_table=data[:, 1])


@dataclass(frozen=True)
class ThermalContext:
    """Inverse temperature, hbar convention, and the dispersion relation."""

    beta: float
    dispersion: Dispersion = Dispersion()
    hbar: float = 1.0

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    def x(self, k):
        """Dimensionless beta*hbar*omega(k); must be positive wherever used."""
        val = self.beta * self.hbar * self.dispersion.omega(k)
        if np.any(np.asarray(val) <= 0):
            raise ValueError("beta*hbar*omega(k) must be positive over the window")
        return val


@dataclass(frozen=True)
class GammaValue:
    """The dimensionless scale factor relating gamma_s = gamma_bar_s * exp(-Gamma)."""

    gamma: float

    def __post_init__(self):
        if not np.isfinite(self.gamma):
            raise ValueError("Gamma must be finite")

    @property
    def scale(self) -> float:
        return float(np.exp(-self.gamma))


@dataclass(frozen=True)
class LambdaMatrix:
    """Hermitian positive-definite Toeplitz kernel of the Gaussian density F."""

    entries: np.ndarray
    gamma: GammaValue
    sites: SiteIndexSet

    def __post_init__(self):
        M = np.asarray(self.entries)
        if M.shape != (len(self.sites), len(self.sites)):
            raise ValueError("Lambda shape does not match site set")
        object.__setattr__(self, "entries", M)

    def lag_values(self) -> np.ndarray:
        """First column, i.e. the entries for lag s - s' = 0 .. len-1."""
        return self.entries[:, 0]


def _ln_expm1(x):
    """ln(e^x - 1) for x > 0, overflow-safe for large x."""
    x = np.asarray(x, dtype=float)
    small = x <= 30.0
    out = np.where(small, np.log(np.expm1(np.where(small, x, 1.0))), x + np.log1p(-np.exp(-np.minimum(x, 745.0))))
    return out


def mean_occupation(ctx: ThermalContext, k):
    """Bose-Einstein occupation 1/(e^{beta*hbar*omega(k)} - 1)."""
    return 1.0 / np.expm1(ctx.x(k))


def gamma_discrete(ctx: ThermalContext, window: SpectralWindow) -> GammaValue:
    """Gamma = (1/2N) * sum_m ln(e^{beta*hbar*omega(k_center + kappa_m)} - 1)."""
    x = ctx.x(window.wavenumbers())
    return GammaValue(float(np.sum(_ln_expm1(x)) / (2 * window.n_modes)))


@lru_cache(maxsize=32)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _window_quadrature(window: SpectralWindow, quad_points: int):
    """Gauss-Legendre nodes/weights on the kappa interval (-pi/l, pi/l]."""
    if quad_points < 2:
        raise ValueError(f"quad_points must be >= 2, got {quad_points}")
    nodes, weights = _leggauss(quad_points)
    half = np.pi / window.lattice_const
    return nodes * half, weights * half


def gamma_continuum(ctx: ThermalContext, window: SpectralWindow, quad_points: int = 1024) -> GammaValue:
    """Infinite-length Gamma = (l/2) * integral over kappa of ln(e^x - 1)/(2*pi)."""
    kappa, w = _window_quadrature(window, quad_points)
    integrand = _ln_expm1(ctx.x(window.k_center + kappa))
    l = window.lattice_const
    return GammaValue(float(l / (4.0 * np.pi) * np.sum(w * integrand)))


def lambda_discrete(ctx: ThermalContext, window: SpectralWindow, sites: SiteIndexSet) -> LambdaMatrix:
    """Finite-window kernel Lambda_{ss'} = e^{-2G} sum_m C*_{sm} C_{s'm} (e^{x_m} - 1).

    Entries depend only on s - s', so the matrix is built from the N distinct
    lags: Lambda(lag) = e^{-2G} (1/N) sum_m e^{-2*pi*i*lag*m/N} (e^{x_m} - 1).
    """
    n = window.half_range
    s_arr = sites.as_array()
    if s_arr.min() < -n or s_arr.max() > n:
        raise IndexError(f"site set {sites.sites} outside window range -{n}..{n}")
    gamma = gamma_discrete(ctx, window)
    d = np.expm1(ctx.x(window.wavenumbers()))
    m = window.mode_indices()
    lags = s_arr[:, None] - s_arr[None, :]
    unique_lags = np.arange(lags.min(), lags.max() + 1)
    phases = np.exp(-2j * np.pi * np.outer(unique_lags, m) / window.n_modes)
    lag_vals = gamma.scale**2 * (phases @ d) / window.n_modes
    entries = lag_vals[lags - lags.min()]
    entries = 0.5 * (entries + entries.conj().T)  # exact Hermiticity, Toeplitz-preserving
    return LambdaMatrix(entries=entries, gamma=gamma, sites=sites)


def lambda_continuum(
    ctx: ThermalContext,
    window: SpectralWindow,
    sites: SiteIndexSet,
    quad_points: int = 1024,
) -> LambdaMatrix:
    """Infinite-length kernel, one quadrature per distinct lag.

    Lambda(lag) = e^{-2G} * l * integral dkappa/(2*pi) e^{-i*lag*kappa*l} (e^x - 1),
    the exact N -> infinity limit of the finite-window sum (whose phases are
    C*_{sm} C_{s'm} = e^{-i(s-s')kappa_m l}/N).  The factor l likewise comes
    from that limit and makes the constant-omega kernel the identity.
    """
    gamma = gamma_continuum(ctx, window, quad_points)
    kappa, w = _window_quadrature(window, quad_points)
    d = np.expm1(ctx.x(window.k_center + kappa))
    l = window.lattice_const
    s_arr = sites.as_array()
    lags = np.arange(len(sites))
    phases = np.exp(-1j * np.outer(lags, kappa) * l)
    lag_vals = gamma.scale**2 * l / (2.0 * np.pi) * (phases @ (w * d))
    i, j = np.indices((len(sites), len(sites)))
    diff = s_arr[i] - s_arr[j]
    entries = np.where(diff >= 0, lag_vals[np.abs(diff)], lag_vals[np.abs(diff)].conj())
    entries = 0.5 * (entries + entries.conj().T)
    return LambdaMatrix(entries=entries, gamma=gamma, sites=sites)


def refine(window: SpectralWindow) -> SpectralWindow:
    """One refinement step N -> 3N, L -> 3L at fixed lattice constant and carrier."""
    if window.n_modes > _MODE_COUNT_LIMIT // 3:
        raise OverflowError(f"refinement would exceed {_MODE_COUNT_LIMIT} modes")
    return SpectralWindow(
        k_center=window.k_center,
        lattice_const=window.lattice_const,
        n_modes=3 * window.n_modes,
    )
