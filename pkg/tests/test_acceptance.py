"""Acceptance suite: one test per criterion, each printing a pass/fail line."""

import json
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from thermalpulses import (
    FieldGrid,
    SiteIndexSet,
    SpectralWindow,
    ThermalContext,
    diagonalize,
    gamma_continuum,
    gamma_discrete,
    lambda_continuum,
    lambda_discrete,
    pulse_set_field,
    refine,
    single_pulse_field,
    transform_matrix,
    typical_pulse_set,
    verify_moments,
    w_site,
)
from thermalpulses.cli import main

CONFIG = "configs/default.json"

MATRIX_FAMILY = [(N, beta) for N in (3, 9, 21, 99) for beta in (0.5, 1.0, 2.0)]


def _announce(name, ok):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")
    assert ok


def _family_lambdas():
    for N, beta in MATRIX_FAMILY:
        w = SpectralWindow(5.0, 1.0, N)
        ctx = ThermalContext(beta=beta)
        lam = lambda_discrete(ctx, w, SiteIndexSet.full(w))
        yield N, beta, w, ctx, lam


def test_criterion_1_eigenvalue_oracle():
    start = time.perf_counter()
    ok = True
    for N, beta, w, ctx, lam in _family_lambdas():
        analytic = np.sort(lam.gamma.scale**2 * np.expm1(ctx.x(w.wavenumbers())))
        evals = np.sort(np.linalg.eigvalsh(lam.entries))
        rel = np.abs(evals - analytic) / np.abs(analytic)
        ok = ok and rel.max() < 1e-9
    elapsed = time.perf_counter() - start
    _announce("1_eigenvalue_oracle", ok and elapsed < 5.0)


def test_criterion_2_determinant_identity():
    ok = True
    for N, beta, w, ctx, lam in _family_lambdas():
        sign, logdet = np.linalg.slogdet(lam.entries)
        ok = ok and abs(sign * np.exp(logdet) - 1.0) < 1e-8
    _announce("2_determinant_identity", ok)


def test_criterion_3_unitarity_orthonormality():
    ok = True
    for N in (3, 99, 999):
        C = transform_matrix(SpectralWindow(5.0, 1.0, N))
        ok = ok and np.abs(C.conj().T @ C - np.eye(N)).max() < 1e-12
    for N in (3, 9, 21):
        w = SpectralWindow(5.0, 1.0, N)
        L = w.quant_length
        z = np.linspace(-L / 2, L / 2, 64 * N + 1)
        n = w.half_range
        W = np.array([w_site(w, s, z) for s in range(-n, n + 1)])
        trapezoid = getattr(np, "trapezoid", np.trapz)
        gram = trapezoid(W[:, None, :] * W[None, :, :], dx=z[1] - z[0], axis=-1)
        ok = ok and np.abs(gram - np.eye(N)).max() < 1e-8
    _announce("3_unitarity_orthonormality", ok)


def test_criterion_4_decomposition_equivalence():
    start = time.perf_counter()
    ctx = ThermalContext(beta=1.0)
    w = SpectralWindow(5.0, 1.0, 9)
    rep = verify_moments(ctx, w, samples=100000, rng_seed=0)
    ok = rep.passed
    # error halves (within 30%) when the sample count quadruples
    small, big = [], []
    for seed in range(160):
        small.append(verify_moments(ctx, w, 25000, 100 + seed).max_abs_error)
        big.append(verify_moments(ctx, w, 100000, 200 + seed).max_abs_error)
    ratio = np.mean(big) / np.mean(small)
    ok = ok and 0.35 < ratio < 0.65
    elapsed = time.perf_counter() - start
    _announce("4_decomposition_equivalence", ok and elapsed < 60.0)


def test_criterion_5_typical_set_exponent():
    ctx = ThermalContext(beta=1.0)
    w = SpectralWindow(5.0, 1.0, 21)
    lam = lambda_discrete(ctx, w, SiteIndexSet.full(w))
    eig = diagonalize(lam)
    target = len(lam.sites) / 2.0
    ok = True
    for seed in range(100):
        p = typical_pulse_set(eig, lam.gamma, seed)
        direct = float(np.real(p.gamma_bar @ lam.entries @ p.gamma_bar.conj()))
        ok = ok and abs(direct - target) / target < 1e-9
    _announce("5_typical_set_exponent", ok)


def test_criterion_6_continuum_convergence():
    start = time.perf_counter()
    ctx = ThermalContext(beta=1.0)
    base = SpectralWindow(5.0, 1.0, 9)
    sites = SiteIndexSet.full(base)
    g_inf = gamma_continuum(ctx, base).gamma
    lam_inf = lambda_continuum(ctx, base, sites).lag_values()
    w = base
    g_errs, l_errs = [], []
    for _ in range(4):
        g_errs.append(abs(gamma_discrete(ctx, w).gamma - g_inf))
        l_errs.append(np.abs(lambda_discrete(ctx, w, sites).lag_values() - lam_inf).max())
        w = refine(w)
    ok = all(e2 <= e1 / 2 for e1, e2 in zip(g_errs, g_errs[1:]))
    ok = ok and all(e2 <= e1 / 2 for e1, e2 in zip(l_errs, l_errs[1:]))
    elapsed = time.perf_counter() - start
    _announce("6_continuum_convergence", ok and elapsed < 10.0)


def _fwhm(window, pulse):
    grid = FieldGrid(-2 * window.lattice_const, 2 * window.lattice_const, 80001)
    prof = single_pulse_field(pulse, 0, grid, window)
    mag = np.abs(prof.envelope)
    above = prof.z[mag >= mag.max() / 2]
    return above[-1] - above[0]


def test_criterion_7_field_shape():
    ctx = ThermalContext(beta=1.0)
    ok = True
    fwhms = {}
    for l in (1.0, 0.5):
        w = SpectralWindow(5.0, l, 9)
        lam = lambda_discrete(ctx, w, SiteIndexSet.full(w))
        pulse = typical_pulse_set(diagonalize(lam), lam.gamma, 0)
        fwhms[l] = _fwhm(w, pulse)
        x_half = brentq(lambda x: np.sin(x) / x - 0.5, 1.0, 3.0, xtol=1e-12)
        expected = 2 * x_half / np.pi * l
        ok = ok and abs(fwhms[l] - expected) / expected < 0.01
        ok = ok and abs(expected / l - 1.2067) < 0.001
        grid = FieldGrid(-4, 4, 2001)
        total = pulse_set_field(pulse, grid, w).envelope
        summed = sum(single_pulse_field(pulse, s, grid, w).envelope for s in pulse.sites)
        ok = ok and np.abs(total - summed).max() < 1e-12
    # doubling the k-window width (halving l) halves the FWHM
    ok = ok and abs(fwhms[0.5] / fwhms[1.0] - 0.5) < 0.01
    _announce("7_field_shape", ok)


def test_criterion_8_reproducibility(tmp_path):
    code = main(["verify", "--config", CONFIG, "--out", str(tmp_path / "report")])
    ok = code == 0
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    for out in (out1, out2):
        main(["decompose", "--config", CONFIG, "--out", str(out)])
        main(["sample", "--config", CONFIG, "--out", str(out), "--seed", "3"])
    for name in ("decompose.json", "lambda_lags.csv", "spectrum.csv", "pulse_typical_000.json"):
        ok = ok and (out1 / name).read_bytes() == (out2 / name).read_bytes()
    report = json.loads((tmp_path / "report" / "report.json").read_text())
    ok = ok and report["pass"] is True
    _announce("8_reproducibility", ok)
