import json

import numpy as np
import pytest
from click.testing import CliRunner

from nhgeo.cli import main
from nhgeo.linalg import save_matrix


@pytest.fixture
def runner():
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


class TestTensorCommand:
    def test_ssh_symmetric_point(self, runner):
        result = run_ok(
            runner,
            ["tensor", "--model", "nh-ssh", "--set", "t=0", "--set", "delta=0",
             "--set", "L=64", "--tensors", "zeta"],
        )
        payload = json.loads(result.output)
        assert payload["tensors"]["zeta"]["components"][0][0]["re"] == pytest.approx(8.0)

    def test_kitaev_closed_form_point(self, runner):
        result = run_ok(
            runner,
            ["tensor", "--model", "kitaev-dissipative", "--set", "h=0",
             "--set", "gamma=1", "--set", "L=64", "--set", "mu_plus=1.0",
             "--set", "mu_minus=0.6", "--tensors", "zeta"],
        )
        payload = json.loads(result.output)
        lam = (1.0 - 0.36) / (1.0 + 0.36)
        zhh = payload["tensors"]["zeta"]["components"][0][0]["re"]
        assert zhh / 64 == pytest.approx(0.375 * lam ** 2, rel=1e-12)

    def test_matrix_family_hermitian_collapse(self, runner, tmp_path, rng):
        N = 4

        def herm(s):
            B = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
            return s * (B + B.conj().T) / 2

        save_matrix(tmp_path / "K.json", herm(1.0) + np.diag(4.0 * np.arange(N)))
        save_matrix(tmp_path / "d1.json", herm(0.5))
        save_matrix(tmp_path / "d2.json", herm(0.5))
        result = run_ok(
            runner,
            ["tensor", "--matrix-file", str(tmp_path / "K.json"),
             "--param-files", str(tmp_path / "d1.json"),
             "--param-files", str(tmp_path / "d2.json"),
             "--tensors", "chi,zeta", "--state", "0"],
        )
        payload = json.loads(result.output)
        chi = payload["tensors"]["chi"]["components"]
        zeta = payload["tensors"]["zeta"]["components"]
        for a in range(2):
            for b in range(2):
                assert chi[a][b]["re"] == pytest.approx(zeta[a][b]["re"], abs=1e-9)
                assert chi[a][b]["im"] == pytest.approx(zeta[a][b]["im"], abs=1e-9)

    def test_invalid_model_exit_2(self, runner):
        result = runner.invoke(main, ["tensor", "--model", "nope"])
        assert result.exit_code == 2

    def test_invalid_tensor_kind_exit_2(self, runner):
        result = runner.invoke(
            main, ["tensor", "--model", "nh-ssh", "--tensors", "bogus"]
        )
        assert result.exit_code == 2

    def test_numerical_failure_exit_3(self, runner):
        result = runner.invoke(
            main,
            ["tensor", "--model", "nh-ssh", "--set", "t=1", "--set", "delta=0",
             "--set", "L=64", "--tensors", "zeta"],
        )
        assert result.exit_code == 3
        assert "CriticalKPoint" in result.output


class TestSpectrumCommand:
    def test_ssh_band_values(self, runner):
        result = run_ok(
            runner,
            ["spectrum", "--model", "nh-ssh", "--set", "t=0.5", "--set", "delta=0.3",
             "--set", "L=4"],
        )
        payload = json.loads(result.output)
        per_k = payload["spectrum"]["per_k"]
        assert len(per_k) == 4
        for entry in per_k:
            e = 1 + 0.25 - 0.09 + 1.0 * np.cos(entry["k"]) - 0.6j * np.sin(entry["k"])
            se = np.sqrt(e)
            got = {
                complex(v["re"], v["im"]) for v in entry["values"]
            }
            for z in got:
                assert min(abs(z - se), abs(z + se)) < 1e-10

    def test_kitaev_rapidity_positivity(self, runner):
        result = run_ok(
            runner,
            ["spectrum", "--model", "kitaev-dissipative", "--set", "L=6",
             "--set", "g=0.3"],
        )
        payload = json.loads(result.output)
        assert payload["spectrum"]["min_re"] > 0
        assert payload["spectrum"]["unique_steady_state"] is True
        assert len(payload["spectrum"]["rapidities"]) == 12

    def test_no_bath_non_unique(self, runner, tmp_path):
        save_matrix(tmp_path / "H.json", np.zeros((2, 2)))
        with open(tmp_path / "bath.json", "w") as fh:
            json.dump({"rows": 2, "cols": 2, "data": [[0.0, 0.0]] * 4}, fh)
        result = run_ok(
            runner,
            ["spectrum", "--model", "quad-liouville",
             "--hmat-file", str(tmp_path / "H.json"),
             "--bath-file", str(tmp_path / "bath.json")],
        )
        payload = json.loads(result.output)
        assert payload["spectrum"]["unique_steady_state"] is False


class TestSweepCommand:
    def test_peaks_near_critical_lines(self, runner, tmp_path):
        out = tmp_path / "scan.csv"
        run_ok(
            runner,
            ["sweep", "--model", "nh-ssh", "--set", "delta=0.5", "--set", "L=512",
             "--axis", "t:0:2:201", "--tensors", "zeta", "--output", str(out),
             "--threads", "2"],
        )
        rows = out.read_text().splitlines()
        assert rows[0].startswith("# nhgeo v")
        cols = rows[1].split(",")
        assert cols[0] == "t" and cols[-1] == "status"
        t, ztt, status = [], [], []
        for line in rows[2:]:
            cells = line.split(",")
            t.append(float(cells[0]))
            ztt.append(float(cells[1]))
            status.append(cells[-1])
        t = np.array(t)
        ztt = np.array(ztt)
        # failures on the two critical grid points are data, not fatal
        assert status.count("CriticalKPoint") == 2
        assert np.isnan(ztt[status.index("CriticalKPoint")])
        for tc in (0.5, 1.5):
            window = (t > tc - 0.25) & (t < tc + 0.25)
            sub = np.where(window)[0]
            best = sub[np.nanargmax(np.where(np.isfinite(ztt[sub]), ztt[sub], -np.inf))]
            assert abs(t[best] - tc) <= 0.01 + 1e-12

    def test_deterministic_and_roundtrip(self, runner, tmp_path):
        base = ["sweep", "--model", "kitaev-dissipative", "--set", "gamma=1",
                "--set", "L=128", "--axis", "h:0:2:41", "--tensors", "zeta"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_ok(runner, base + ["--output", str(a), "--threads", "3"])
        run_ok(runner, base + ["--output", str(b), "--threads", "1"])
        assert a.read_bytes() == b.read_bytes()
        # 17 significant digits round-trip bit-exactly
        for line in a.read_text().splitlines()[2:]:
            cells = line.split(",")
            for cell in cells[1:-1]:
                v = float(cell)
                if np.isfinite(v):
                    assert format(v, ".17g") == cell

    def test_config_file_and_json_format(self, runner, tmp_path):
        cfg = {
            "model": "nh-ssh",
            "params": {"delta": 0.3, "L": 64},
            "axes": [{"name": "t", "min": 0.0, "max": 1.6, "steps": 9}],
            "tensors": ["zeta"],
            "format": "json",
            "output": str(tmp_path / "scan.json"),
        }
        with open(tmp_path / "cfg.json", "w") as fh:
            json.dump(cfg, fh)
        run_ok(runner, ["sweep", "--config", str(tmp_path / "cfg.json")])
        payload = json.loads((tmp_path / "scan.json").read_text())
        assert payload["columns"][0] == "t"
        assert len(payload["rows"]) == 9

    def test_cli_set_overrides_config(self, runner, tmp_path):
        cfg = {
            "model": "nh-ssh",
            "params": {"delta": 0.3, "L": 16},
            "axes": [{"name": "t", "min": 0.0, "max": 1.0, "steps": 3}],
            "output": str(tmp_path / "o.csv"),
        }
        with open(tmp_path / "cfg.json", "w") as fh:
            json.dump(cfg, fh)
        run_ok(runner, ["sweep", "--config", str(tmp_path / "cfg.json"),
                        "--set", "delta=0.4"])
        assert "delta=0.4" in (tmp_path / "o.csv").read_text().splitlines()[0]

    def test_threads_env_fallback(self, runner, tmp_path, monkeypatch):
        base = ["sweep", "--model", "nh-ssh", "--set", "delta=0.3", "--set", "L=32",
                "--axis", "t:0:1:11", "--tensors", "zeta"]
        a, b = tmp_path / "env.csv", tmp_path / "flag.csv"
        monkeypatch.setenv("NHGEO_THREADS", "2")
        run_ok(runner, base + ["--output", str(a)])
        monkeypatch.delenv("NHGEO_THREADS")
        run_ok(runner, base + ["--output", str(b), "--threads", "1"])
        assert a.read_bytes() == b.read_bytes()

    def test_zero_step_axis_exit_2(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["sweep", "--model", "nh-ssh", "--axis", "t:0:2:1",
             "--output", str(tmp_path / "x.csv")],
        )
        assert result.exit_code == 2

    def test_axis_collision_exit_2(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["sweep", "--model", "nh-ssh", "--set", "t=1", "--axis", "t:0:2:5",
             "--output", str(tmp_path / "x.csv")],
        )
        assert result.exit_code == 2


class TestVerifyCommand:
    def test_quick_subset_passes(self, runner):
        result = runner.invoke(
            main,
            ["verify", "--level", "quick",
             "--only", "weak-coupling,kitaev-closed-forms,steady-state"],
        )
        assert result.exit_code == 0, result.output
        assert result.output.count("PASS") == 3
