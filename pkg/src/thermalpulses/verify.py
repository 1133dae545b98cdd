"""Monte-Carlo and invariant verification of the pulse-set decomposition.

verify_moments samples pulse sets from the Gaussian density, maps back to
monochromatic amplitudes alpha = C^dag gamma, and checks that the first and
second moments reproduce the exact thermal values delta_{mm'} <n_m> within
5-sigma statistical bounds.  verify_invariants bundles the structural checks
of all modules into one pass/fail report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .fields import PREFACTOR_NORMALIZED, wannier
from .modes import SiteIndexSet, SpectralWindow, transform_matrix, w_site
from .sampler import _draw_eta, diagonalize, typical_pulse_set
from .thermal import (
    ThermalContext,
    gamma_continuum,
    gamma_discrete,
    lambda_discrete,
    mean_occupation,
    refine,
)

__all__ = ["MomentReport", "CheckResult", "verify_moments", "verify_invariants", "lambda_checks"]


@dataclass(frozen=True)
class MomentReport:
    """Second-moment comparison between sampled and exact thermal statistics."""

    estimated: np.ndarray
    exact: np.ndarray
    sample_count: int
    max_abs_error: float
    passed: bool
    first_moment_max: float
    first_moment_bound: float

    def to_json_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "max_abs_error": self.max_abs_error,
            "pass": bool(self.passed),
            "first_moment_max": self.first_moment_max,
            "first_moment_bound": self.first_moment_bound,
            "exact_diagonal": [float(v) for v in np.diag(self.exact)],
            "estimated": [
                [[float(v.real), float(v.imag)] for v in row] for row in self.estimated
            ],
        }


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    bound: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": self.measured,
            "bound": self.bound,
            "pass": bool(self.passed),
        }


def sample_mode_amplitudes(
    ctx: ThermalContext, window: SpectralWindow, samples: int, rng_seed: int
) -> np.ndarray:
    """samples x N matrix of alpha draws obtained through the pulse-set route.

    Each row is one pulse set drawn from the Gaussian density, converted to
    physical amplitudes and mapped back with alpha = C^dag gamma.
    """
    sites = SiteIndexSet.full(window)
    lam = lambda_discrete(ctx, window, sites)
    eig = diagonalize(lam)
    rng = np.random.default_rng(rng_seed)
    eta = _draw_eta(rng, eig.theta, samples)
    gamma_bar = eta @ eig.U.conj().T
    gamma = gamma_bar * lam.gamma.scale
    C = transform_matrix(window)
    return gamma @ C.conj()


def verify_moments(
    ctx: ThermalContext, window: SpectralWindow, samples: int, rng_seed: int
) -> MomentReport:
    """Monte-Carlo check that E[alpha_m alpha*_m'] = delta_{mm'} <n_m>."""
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    alpha = sample_mode_amplitudes(ctx, window, samples, rng_seed)
    n = mean_occupation(ctx, window.wavenumbers())
    est = (alpha.T @ alpha.conj()) / samples
    exact = np.diag(n)
    err = np.abs(est - exact)
    bound = 5.0 * (exact + 1.0) / np.sqrt(samples)
    first = np.abs(alpha.mean(axis=0))
    first_bound = 5.0 * np.sqrt(n / samples)
    passed = bool(np.all(err < bound) and np.all(first < first_bound))
    return MomentReport(
        estimated=est,
        exact=exact,
        sample_count=samples,
        max_abs_error=float(err.max()),
        passed=passed,
        first_moment_max=float(first.max()),
        first_moment_bound=float(first_bound.min()),
    )


def _trapezoid(y, dx):
    integrate = getattr(np, "trapezoid", np.trapz)
    return integrate(y, dx=dx, axis=-1)


def lambda_checks(lam) -> list[CheckResult]:
    """Hermiticity, Toeplitz structure, and positive definiteness of a kernel."""
    M = lam.entries
    scale = float(np.abs(M).max())
    herm = float(np.abs(M - M.conj().T).max())
    # max spread of entries along any diagonal
    toep = 0.0
    k = M.shape[0]
    for d in range(-(k - 1), k):
        diag = np.diagonal(M, offset=d)
        if len(diag) > 1:
            toep = max(toep, float(np.abs(diag - diag[0]).max()))
    evals = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    return [
        CheckResult("lambda_hermitian", herm, 1e-12 * scale, herm < 1e-12 * scale),
        CheckResult("lambda_toeplitz", toep, 1e-12 * scale, toep < 1e-12 * scale),
        CheckResult("lambda_positive_definite", float(evals.min()), 0.0, bool(evals.min() > 0)),
    ]


def verify_invariants(
    ctx: ThermalContext, window: SpectralWindow, sites: SiteIndexSet
) -> list[CheckResult]:
    """Run the structural invariant suite; failures are report entries."""
    checks: list[CheckResult] = []
    N = window.n_modes
    C = transform_matrix(window)
    unit = float(np.abs(C.conj().T @ C - np.eye(N)).max())
    checks.append(CheckResult("transform_unitary", unit, 1e-12, unit < 1e-12))

    # w_s orthonormality over one period by trapezoid quadrature
    L = window.quant_length
    pts = 64 * N + 1
    z = np.linspace(-L / 2, L / 2, pts)
    site_arr = sites.as_array()
    W = np.array([w_site(window, s, z) for s in site_arr])
    gram = _trapezoid(W[:, None, :] * W[None, :, :], dx=z[1] - z[0])
    ortho = float(np.abs(gram - np.eye(len(site_arr))).max())
    checks.append(CheckResult("w_site_orthonormal", ortho, 1e-8, ortho < 1e-8))

    lam = lambda_discrete(ctx, window, sites)
    checks.extend(lambda_checks(lam))

    full = SiteIndexSet.full(window)
    lam_full = lambda_discrete(ctx, window, full)
    sign, logdet = np.linalg.slogdet(lam_full.entries)
    det_err = float(abs(sign * np.exp(logdet) - 1.0))
    checks.append(CheckResult("lambda_full_det_one", det_err, 1e-8, det_err < 1e-8))

    analytic = lam_full.gamma.scale**2 * np.expm1(ctx.x(window.wavenumbers()))
    evals = np.sort(np.linalg.eigvalsh(lam_full.entries))
    rel = float(np.abs(evals - np.sort(analytic)).max() / np.abs(analytic).max())
    checks.append(CheckResult("eigenvalue_oracle", rel, 1e-9, rel < 1e-9))

    eig = diagonalize(lam)
    pulse = typical_pulse_set(eig, lam.gamma, rng_seed=0)
    target = len(sites) / 2.0
    exp_err = float(abs(pulse.likelihood_exponent - target) / target)
    checks.append(CheckResult("typical_set_exponent", exp_err, 1e-9, exp_err < 1e-9))

    # cardinal interpolation of the sinc profile at lattice points
    l = window.lattice_const
    s_eval = site_arr[: min(5, len(site_arr))]
    card = np.array([[wannier(window, s, sp * l, PREFACTOR_NORMALIZED) for sp in s_eval] for s in s_eval])
    card_err = float(np.abs(card * np.sqrt(l) - np.eye(len(s_eval))).max())
    checks.append(CheckResult("cardinal_interpolation", card_err, 1e-12, card_err < 1e-12))

    # one refinement step moves the discrete Gamma toward the continuum value
    g_cont = gamma_continuum(ctx, window).gamma
    e0 = abs(gamma_discrete(ctx, window).gamma - g_cont)
    e1 = abs(gamma_discrete(ctx, refine(window)).gamma - g_cont)
    converges = e1 <= e0 + 1e-14
    checks.append(CheckResult("refinement_convergence", e1, e0 + 1e-14, converges))
    return checks


def report_to_json(checks: list[CheckResult], moments: MomentReport | None = None) -> dict:
    payload = {"checks": [c.to_json_dict() for c in checks]}
    if moments is not None:
        payload["moments"] = moments.to_json_dict()
    payload["pass"] = bool(
        all(c.passed for c in checks) and (moments is None or moments.passed)
    )
    return payload


def save_report(path, checks: list[CheckResult], moments: MomentReport | None = None) -> bool:
    payload = report_to_json(checks, moments)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    return payload["pass"]
