import json

import numpy as np
import pytest

from thermalpulses.cli import main

DEFAULT_CONFIG = "configs/default.json"


def run(args):
    return main(args)


def write_config(tmp_path, **overrides):
    cfg = {
        "k_center": 5.0,
        "lattice_const": 1.0,
        "n_modes": 9,
        "beta": 1.0,
        "samples": 2000,
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


class TestDecompose:
    def test_single_mode_lambda_is_one(self, tmp_path):
        cfg = write_config(tmp_path, n_modes=1)
        out = tmp_path / "out"
        assert run(["decompose", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "decompose.json").read_text())
        np.testing.assert_allclose(payload["lambda_by_lag"], [[1.0, 0.0]], atol=1e-12)
        np.testing.assert_allclose(payload["theta"], [1.0], atol=1e-12)

    def test_flat_occupation_identity(self, tmp_path):
        table = tmp_path / "disp.csv"
        table.write_text("-100.0,0.6931471805599453\n100.0,0.6931471805599453\n")
        cfg = write_config(tmp_path, dispersion={"kind": "table", "path": str(table)})
        out = tmp_path / "out"
        assert run(["decompose", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "decompose.json").read_text())
        lags = np.array(payload["lambda_by_lag"])
        assert lags[0] == pytest.approx([1.0, 0.0], abs=1e-12)
        assert np.abs(lags[1:]).max() < 1e-12

    def test_theta_matches_eigenvalue_oracle(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert run(["decompose", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "decompose.json").read_text())
        from thermalpulses import SpectralWindow, ThermalContext, mean_occupation

        w = SpectralWindow(5.0, 1.0, 9)
        ctx = ThermalContext(beta=1.0)
        analytic = np.sort(np.exp(-2 * payload["gamma"]) * np.expm1(ctx.x(w.wavenumbers())))
        np.testing.assert_allclose(np.array(payload["theta"]), analytic, rtol=1e-9)

    def test_outputs_exist(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        run(["decompose", "--config", cfg, "--out", str(out)])
        for name in ("decompose.json", "lambda_lags.csv", "spectrum.csv", "spectrum.png"):
            assert (out / name).is_file()


class TestSample:
    def test_typical_schema(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert run(["sample", "--config", cfg, "--out", str(out), "--count", "2"]) == 0
        files = sorted(out.glob("pulse_typical_*.json"))
        assert len(files) == 2
        payload = json.loads(files[0].read_text())
        assert set(payload) == {"sites", "gamma_bar", "gamma_scale", "seed", "likelihood_exponent"}
        assert payload["likelihood_exponent"] == pytest.approx(len(payload["sites"]) / 2)

    def test_random_flag(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert run(["sample", "--config", cfg, "--out", str(out), "--random"]) == 0
        assert (out / "pulse_random_000.json").is_file()

    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        run(["sample", "--config", cfg, "--out", str(out1), "--seed", "5"])
        run(["sample", "--config", cfg, "--out", str(out2), "--seed", "5"])
        a = (out1 / "pulse_typical_000.json").read_bytes()
        b = (out2 / "pulse_typical_000.json").read_bytes()
        assert a == b


class TestField:
    def test_one_site_set_is_pure_sinc(self, tmp_path):
        cfg = write_config(tmp_path, grid={"z_min": -3.0, "z_max": 3.0, "n_points": 601})
        pulse = tmp_path / "one.json"
        pulse.write_text(
            json.dumps(
                {
                    "sites": [0],
                    "gamma_bar": [[1.0, 0.0]],
                    "gamma_scale": 0.0,
                    "seed": None,
                    "likelihood_exponent": 1.0,
                }
            )
        )
        out = tmp_path / "out"
        assert run(["field", "--config", cfg, "--out", str(out), str(pulse)]) == 0
        rows = (out / "field_set.csv").read_text().strip().splitlines()[1:]
        data = np.array([[float(v) for v in r.split(",")] for r in rows])
        expected = 2 * np.pi * np.sinc(data[:, 0])
        np.testing.assert_allclose(data[:, 1], expected, atol=1e-10)
        assert (out / "field.png").is_file()

    def test_singles_and_contrast(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        run(["sample", "--config", cfg, "--out", str(out)])
        code = run(
            [
                "field",
                "--config",
                cfg,
                "--out",
                str(out),
                str(out / "pulse_typical_000.json"),
                "--single",
                "0",
                "--single",
                "-1",
                "--contrast",
            ]
        )
        assert code == 0
        assert (out / "field_pulse_s+0.csv").is_file()
        assert (out / "field_pulse_s-1.csv").is_file()
        assert (out / "field_set_wide.csv").is_file()
        assert (out / "field_set.json").is_file()

    def test_missing_pulse_file(self, tmp_path):
        cfg = write_config(tmp_path)
        assert run(["field", "--config", cfg, "--out", str(tmp_path / "o"), "nope.json"]) == 1


class TestVerify:
    def test_exit_zero_and_report(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert run(["verify", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "report.json").read_text())
        assert payload["pass"] is True
        assert all(c["pass"] for c in payload["checks"])


class TestConverge:
    def test_table_and_monotone_error(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert run(["converge", "--config", cfg, "--out", str(out), "--steps", "2"]) == 0
        payload = json.loads((out / "converge.json").read_text())
        errs = [r["gamma_error"] for r in payload["rows"]]
        assert errs[1] < errs[0] and errs[2] < errs[1]
        assert (out / "converge.csv").is_file()
        assert (out / "converge.png").is_file()


class TestValidation:
    def test_even_mode_count_rejected(self, tmp_path):
        cfg = write_config(tmp_path, n_modes=4)
        out = tmp_path / "out"
        assert run(["decompose", "--config", cfg, "--out", str(out)]) == 1
        assert not out.exists()  # no partial output

    def test_negative_beta_rejected(self, tmp_path):
        cfg = write_config(tmp_path, beta=-1.0)
        assert run(["decompose", "--config", cfg, "--out", str(tmp_path / "o")]) == 1

    def test_unknown_key_rejected(self, tmp_path):
        cfg = write_config(tmp_path, bogus=1)
        assert run(["decompose", "--config", cfg, "--out", str(tmp_path / "o")]) == 1

    def test_sites_outside_window_rejected(self, tmp_path):
        cfg = write_config(tmp_path, n_modes=3, sites=11)
        assert run(["decompose", "--config", cfg, "--out", str(tmp_path / "o")]) == 1

    def test_bad_prefactor_rejected(self, tmp_path):
        cfg = write_config(tmp_path, prefactor="wrong")
        assert run(["decompose", "--config", cfg, "--out", str(tmp_path / "o")]) == 1

    def test_missing_config_file(self, tmp_path):
        assert run(["decompose", "--config", str(tmp_path / "none.json")]) == 1
