"""Command-line front end.

Subcommands: decompose, sample, field, verify, converge.  Configuration comes
from a JSON file plus flag overrides; every subcommand validates the full
configuration before computing anything, and writes plot-ready CSV/JSON plus
rendered PNG figures into the output directory.

Exit codes: 0 success, 1 validation error, 2 check failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fields import FieldGrid, pulse_set_field, single_pulse_field
from .modes import SiteIndexSet, SpectralWindow
from .sampler import PulseSet, diagonalize, random_pulse_set, typical_pulse_set
from .thermal import (
    Dispersion,
    ThermalContext,
    gamma_continuum,
    gamma_discrete,
    lambda_continuum,
    lambda_discrete,
    refine,
)
from .verify import save_report, verify_invariants, verify_moments
from . import plotting

DEFAULTS = {
    "k_center": 5.0,
    "lattice_const": 1.0,
    "n_modes": 21,
    "beta": 1.0,
    "hbar": 1.0,
    "dispersion": {"kind": "linear", "v": 1.0},
    "sites": None,  # site count, centered; null = full window
    "seed": 0,
    "samples": 20000,
    "quad_points": 1024,
    "prefactor": "paper",
    "grid": {"z_min": -10.0, "z_max": 10.0, "n_points": 2001, "include_carrier": False},
    "out": "out",
}


@dataclass(frozen=True)
class RunConfig:
    window: SpectralWindow
    ctx: ThermalContext
    sites: SiteIndexSet
    seed: int
    samples: int
    quad_points: int
    prefactor: str
    grid: FieldGrid
    out: Path
    raw: dict = field(repr=False, default_factory=dict)


class ConfigError(ValueError):
    pass


def _build_dispersion(spec) -> Dispersion:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("dispersion must be an object with a 'kind' field")
    if spec["kind"] == "linear":
        return Dispersion(kind="linear", v=float(spec.get("v", 1.0)))
    if spec["kind"] == "table":
        if "path" not in spec:
            raise ConfigError("tabulated dispersion needs a 'path' field")
        return Dispersion.from_file(spec["path"])
    raise ConfigError(f"unknown dispersion kind {spec['kind']!r}")


def load_config(path: str | None, overrides: dict) -> RunConfig:
    raw = dict(DEFAULTS)
    if path is not None:
        with open(path) as f:
            user = json.load(f)
        unknown = set(user) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for k, v in user.items():
            if isinstance(DEFAULTS[k], dict) and isinstance(v, dict):
                raw[k] = {**DEFAULTS[k], **v}
            else:
                raw[k] = v
    for k, v in overrides.items():
        if v is not None:
            raw[k] = v
    try:
        window = SpectralWindow(
            k_center=float(raw["k_center"]),
            lattice_const=float(raw["lattice_const"]),
            n_modes=int(raw["n_modes"]),
        )
        ctx = ThermalContext(
            beta=float(raw["beta"]),
            hbar=float(raw["hbar"]),
            dispersion=_build_dispersion(raw["dispersion"]),
        )
        sites = (
            SiteIndexSet.full(window)
            if raw["sites"] is None
            else SiteIndexSet.centered(int(raw["sites"]))
        )
        g = raw["grid"]
        grid = FieldGrid(
            z_min=float(g["z_min"]),
            z_max=float(g["z_max"]),
            n_points=int(g["n_points"]),
            include_carrier=bool(g["include_carrier"]),
        )
        if raw["prefactor"] not in ("paper", "normalized"):
            raise ConfigError(f"prefactor must be 'paper' or 'normalized', got {raw['prefactor']!r}")
        if int(raw["quad_points"]) < 2:
            raise ConfigError("quad_points must be >= 2")
        if int(raw["samples"]) < 1:
            raise ConfigError("samples must be >= 1")
        cfg = RunConfig(
            window=window,
            ctx=ctx,
            sites=sites,
            seed=int(raw["seed"]),
            samples=int(raw["samples"]),
            quad_points=int(raw["quad_points"]),
            prefactor=str(raw["prefactor"]),
            grid=grid,
            out=Path(raw["out"]),
            raw=raw,
        )
    except (ValueError, IndexError, OSError) as e:
        raise ConfigError(str(e)) from e
    # fail fast on preconditions shared by all subcommands
    n = window.half_range
    smin, smax = cfg.sites.sites[0], cfg.sites.sites[-1]
    if smin < -n or smax > n:
        raise ConfigError(f"site set {smin}..{smax} outside window range -{n}..{n}")
    ctx.x(window.wavenumbers())  # occupation defined over the window
    return cfg


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def cmd_decompose(cfg: RunConfig) -> int:
    lam = lambda_discrete(cfg.ctx, cfg.window, cfg.sites)
    eig = diagonalize(lam)
    lags = lam.lag_values()
    cfg.out.mkdir(parents=True, exist_ok=True)
    payload = {
        "gamma": lam.gamma.gamma,
        "gamma_continuum": gamma_continuum(cfg.ctx, cfg.window, cfg.quad_points).gamma,
        "sites": list(cfg.sites.sites),
        "lambda_by_lag": [[float(v.real), float(v.imag)] for v in lags],
        "theta": [float(t) for t in eig.theta],
    }
    with open(cfg.out / "decompose.json", "w") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    _write_csv(
        cfg.out / "lambda_lags.csv",
        ["lag", "re_lambda", "im_lambda"],
        [[i, repr(float(v.real)), repr(float(v.imag))] for i, v in enumerate(lags)],
    )
    _write_csv(
        cfg.out / "spectrum.csv",
        ["r", "theta"],
        [[i, repr(float(t))] for i, t in enumerate(eig.theta)],
    )
    plotting.plot_spectrum(cfg.out / "spectrum.png", eig.theta, lags)
    print(f"wrote decomposition to {cfg.out}")
    return 0


def cmd_sample(cfg: RunConfig, typical: bool, count: int) -> int:
    lam = lambda_discrete(cfg.ctx, cfg.window, cfg.sites)
    eig = diagonalize(lam)
    cfg.out.mkdir(parents=True, exist_ok=True)
    kind = "typical" if typical else "random"
    for i in range(count):
        seed = cfg.seed + i
        draw = typical_pulse_set if typical else random_pulse_set
        pulse = draw(eig, lam.gamma, seed)
        path = cfg.out / f"pulse_{kind}_{i:03d}.json"
        pulse.save(path)
        print(f"wrote {path}")
    return 0


def cmd_field(cfg: RunConfig, pulse_path: str, singles: list[int], contrast: bool) -> int:
    pulse = PulseSet.load(pulse_path)
    cfg.out.mkdir(parents=True, exist_ok=True)
    profile = pulse_set_field(pulse, cfg.grid, cfg.window, cfg.prefactor)
    meta = {
        "k_center": cfg.window.k_center,
        "lattice_const": cfg.window.lattice_const,
        "n_modes": cfg.window.n_modes,
        "beta": cfg.ctx.beta,
        "seed": pulse.seed,
        "prefactor": cfg.prefactor,
    }
    profile.save_csv(cfg.out / "field_set.csv")
    profile.save_json(cfg.out / "field_set.json", meta)
    single_profiles = {}
    for s in singles:
        sp = single_pulse_field(pulse, s, cfg.grid, cfg.window, cfg.prefactor)
        sp.save_csv(cfg.out / f"field_pulse_s{s:+d}.csv")
        single_profiles[s] = sp
    contrast_profile = None
    if contrast:
        # wider k-window (half the lattice constant): pulses narrow accordingly
        wide = SpectralWindow(
            k_center=cfg.window.k_center,
            lattice_const=cfg.window.lattice_const / 2.0,
            n_modes=cfg.window.n_modes,
        )
        lam = lambda_discrete(cfg.ctx, wide, SiteIndexSet.centered(len(cfg.sites)))
        wide_pulse = typical_pulse_set(diagonalize(lam), lam.gamma, cfg.seed)
        contrast_profile = pulse_set_field(wide_pulse, cfg.grid, wide, cfg.prefactor)
        contrast_profile.save_csv(cfg.out / "field_set_wide.csv")
    plotting.plot_field(
        cfg.out / "field.png", profile, cfg.ctx, cfg.window, single_profiles, contrast_profile
    )
    print(f"wrote field profiles to {cfg.out}")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    checks = verify_invariants(cfg.ctx, cfg.window, cfg.sites)
    moments = verify_moments(cfg.ctx, cfg.window, max(cfg.samples, 1000), cfg.seed)
    cfg.out.mkdir(parents=True, exist_ok=True)
    ok = save_report(cfg.out / "report.json", checks, moments)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  measured={c.measured:.3e}  bound={c.bound:.3e}")
    print(
        f"{'PASS' if moments.passed else 'FAIL'}  moment_equivalence  "
        f"max_abs_error={moments.max_abs_error:.3e}  samples={moments.sample_count}"
    )
    return 0 if ok else 2


def cmd_converge(cfg: RunConfig, steps: int) -> int:
    g_cont = gamma_continuum(cfg.ctx, cfg.window, cfg.quad_points)
    lam_cont = lambda_continuum(cfg.ctx, cfg.window, cfg.sites, cfg.quad_points)
    rows = []
    win = cfg.window
    for j in range(steps + 1):
        g_j = gamma_discrete(cfg.ctx, win)
        lam_j = lambda_discrete(cfg.ctx, win, cfg.sites)
        lag_err = float(np.abs(lam_j.lag_values() - lam_cont.lag_values()).max())
        rows.append(
            {
                "j": j,
                "n_modes": win.n_modes,
                "gamma": g_j.gamma,
                "gamma_error": abs(g_j.gamma - g_cont.gamma),
                "lambda_max_lag_error": lag_err,
            }
        )
        win = refine(win)
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_csv(
        cfg.out / "converge.csv",
        ["j", "n_modes", "gamma", "gamma_error", "lambda_max_lag_error"],
        [
            [r["j"], r["n_modes"], repr(r["gamma"]), repr(r["gamma_error"]), repr(r["lambda_max_lag_error"])]
            for r in rows
        ],
    )
    with open(cfg.out / "converge.json", "w") as f:
        json.dump({"gamma_continuum": g_cont.gamma, "rows": rows}, f, indent=2)
        f.write("\n")
    plotting.plot_convergence(cfg.out / "converge.png", rows)
    for r in rows:
        print(
            f"j={r['j']}  N={r['n_modes']}  Gamma={r['gamma']:.10f}  "
            f"err={r['gamma_error']:.3e}  lambda_err={r['lambda_max_lag_error']:.3e}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="thermalpulses",
        description="Decompose quasi-1D thermal light into mixtures of sets of localized coherent pulses.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--seed", type=int, help="RNG seed")
        sp.add_argument("--samples", type=int, help="Monte-Carlo sample count")
        sp.add_argument("--sites", type=int, help="number of pulse sites, centered")
        sp.add_argument("--quad-points", type=int, dest="quad_points", help="quadrature nodes")
        sp.add_argument("--prefactor", choices=["paper", "normalized"], help="sinc prefactor convention")
        sp.add_argument("--out", help="output directory")

    sp = sub.add_parser("decompose", help="write Gamma, Lambda lags, and eigen-spectrum")
    common(sp)
    sp = sub.add_parser("sample", help="draw pulse sets and write them as JSON")
    common(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--typical", action="store_true", default=True, help="typical pulse sets (default)")
    g.add_argument("--random", action="store_true", help="fully random pulse sets")
    sp.add_argument("--count", type=int, default=1, help="number of pulse sets")
    sp = sub.add_parser("field", help="evaluate field envelopes for a pulse set")
    common(sp)
    sp.add_argument("pulse_set", help="pulse-set JSON file")
    sp.add_argument("--single", type=int, action="append", default=[], help="also export this single pulse (repeatable)")
    sp.add_argument("--contrast", action="store_true", help="add a wider-window profile (narrower pulses)")
    sp = sub.add_parser("verify", help="run invariant and moment verification")
    common(sp)
    sp = sub.add_parser("converge", help="refinement convergence toward the continuum")
    common(sp)
    sp.add_argument("--steps", type=int, default=3, help="number of refinement steps")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        k: getattr(args, k, None)
        for k in ("seed", "samples", "sites", "quad_points", "prefactor", "out")
    }
    try:
        cfg = load_config(args.config, overrides)
        if args.command == "field":
            if not Path(args.pulse_set).is_file():
                raise ConfigError(f"pulse-set file not found: {args.pulse_set}")
    except (ConfigError, json.JSONDecodeError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if args.command == "decompose":
        return cmd_decompose(cfg)
    if args.command == "sample":
        return cmd_sample(cfg, typical=not args.random, count=args.count)
    if args.command == "field":
        try:
            return cmd_field(cfg, args.pulse_set, args.single, args.contrast)
        except (KeyError, ValueError, IndexError) as e:
            print(f"error: invalid pulse-set file: {e}", file=sys.stderr)
            return 1
    if args.command == "verify":
        return cmd_verify(cfg)
    if args.command == "converge":
        return cmd_converge(cfg, args.steps)
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
