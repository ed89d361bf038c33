"""Command-line behaviour: exit codes, config precedence, determinism, atomic output."""

import json
import os
import subprocess
import sys

import pytest

from vortexforge.cli import main


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def test_poly_json(tmp_path):
    assert run(tmp_path, "poly", "--n", "2") == 0
    data = json.loads((tmp_path / "poly_n2.json").read_text())
    assert data["degree"] == 3 and data["A"] == ["-3/8", "3/4", "3/2", "1/1"]


def test_poly_csv_and_mu(tmp_path):
    assert run(tmp_path, "poly", "--n", "2", "--mu", "2", "--format", "csv") == 0
    lines = (tmp_path / "poly_n2.csv").read_text().splitlines()
    assert lines[0] == "power,A,B" and lines[1] == "0,-3/1,-3/1"  # (z+1)^3 - 4 and its reflection


def test_roots_outputs(tmp_path):
    for fmt in ("json", "csv", "svg"):
        assert run(tmp_path, "roots", "--n", "3", "--format", fmt) == 0
        assert (tmp_path / f"roots_n3.{fmt}").stat().st_size > 0
    data = json.loads((tmp_path / "roots_n3.json").read_text())
    assert len(data["roots"]) == 6


@pytest.mark.parametrize("argv", [
    ["poly", "--n", "0"], ["poly", "--mu", "-1"], ["poly", "--mu", "x"],
    ["roots", "--precision", "8"], ["nosuchcommand"], ["poly", "--format", "xml"],
    ["nondeg", "--mu", "2"], ["poly", "--config", "/nonexistent/cfg"],
])
def test_usage_errors(tmp_path, argv):
    assert run(tmp_path, *argv) == 2


def test_verify_exact_and_corruption(tmp_path):
    assert run(tmp_path, "verify", "--n", "4") == 0
    data = json.loads((tmp_path / "verify_n4_exact.json").read_text())
    assert data["pass"] and set(data["results"]) == {"1", "2", "3", "4"}
    assert run(tmp_path, "verify", "--n", "4", "--inject-corruption") == 1
    data = json.loads((tmp_path / "verify_n4_exact.json").read_text())
    assert all(f.startswith("n=4:") for f in data["failures"])


def test_verify_modular_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verify", "--n", "8", "--mode", "modular", "--out", str(a)]) == 0
    assert main(["verify", "--n", "8", "--mode", "modular", "--jobs", "3", "--out", str(b)]) == 0
    assert (a / "verify_n8_modular.json").read_bytes() == (b / "verify_n8_modular.json").read_bytes()


def test_nondeg_and_report(tmp_path):
    assert run(tmp_path, "nondeg", "--n", "3") == 0
    assert json.loads((tmp_path / "nondeg_n3.json").read_text())["pass"]
    assert run(tmp_path, "report", "--n", "3") == 0
    assert json.loads((tmp_path / "report_n3.json").read_text())["pass"]


def test_config_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nn = 3\nformat = csv\n")
    out = tmp_path / "o"
    assert main(["poly", "--config", str(cfg), "--out", str(out)]) == 0
    assert (out / "poly_n3.csv").exists()
    assert main(["poly", "--config", str(cfg), "--n", "2", "--out", str(out)]) == 0
    assert (out / "poly_n2.csv").exists()
    env_out = tmp_path / "env"
    monkeypatch.setenv("VORTEXFORGE_OUT", str(env_out))
    assert main(["poly", "--config", str(cfg), "--out", str(out)]) == 0
    assert (env_out / "poly_n3.csv").exists()


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = red\n")
    assert run(tmp_path, "poly", "--config", str(cfg)) == 2
    cfg.write_text("n 3\n")
    assert run(tmp_path, "poly", "--config", str(cfg)) == 2


def test_timing_flag(tmp_path):
    assert run(tmp_path, "poly", "--timing") == 0
    assert "wall_ms" in json.loads((tmp_path / "poly_n2.json").read_text())
    assert run(tmp_path, "poly") == 0
    assert "wall_ms" not in json.loads((tmp_path / "poly_n2.json").read_text())


def test_determinism(tmp_path):
    outputs = []
    for k in range(2):
        d = tmp_path / str(k)
        for argv in (["roots", "--n", "4"], ["roots", "--n", "4", "--format", "csv"],
                     ["roots", "--n", "2", "--format", "svg"], ["verify", "--n", "3"]):
            assert main([*argv, "--out", str(d), "--seed", "5"]) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert outputs[0] == outputs[1]


def test_atomic_write_leaves_no_temporaries(tmp_path):
    assert run(tmp_path, "poly", "--n", "5") == 0
    assert [p.name for p in tmp_path.iterdir()] == ["poly_n5.json"]
    assert oct((tmp_path / "poly_n5.json").stat().st_mode & 0o777) == "0o644"


def test_module_entry_point(tmp_path):
    env = dict(os.environ, VORTEXFORGE_OUT=str(tmp_path))
    proc = subprocess.run([sys.executable, "-m", "vortexforge", "poly", "--n", "1"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert (tmp_path / "poly_n1.json").exists()
    proc = subprocess.run([sys.executable, "-m", "vortexforge", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
