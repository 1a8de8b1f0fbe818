import json
import warnings
from pathlib import Path

import numpy as np

from qmpemba.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run_cli(args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return main([str(a) for a in args])


def read_csv(path):
    lines = [
        ln for ln in path.read_text().splitlines() if not ln.startswith("#")
    ]
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


def test_spectrum_rows_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli(["spectrum", "--config", CONFIGS / "threelevel.toml",
                    "--out", out1]) == 0
    assert run_cli(["spectrum", "--config", CONFIGS / "threelevel.toml",
                    "--out", out2]) == 0
    header, rows = read_csv(out1 / "spectrum.csv")
    assert header == ["k", "re_lambda", "im_lambda", "block"]
    assert len(rows) == 9 + 18
    assert (out1 / "spectrum.csv").read_bytes() == (out2 / "spectrum.csv").read_bytes()


def test_spectrum_zero_coupling_tags(tmp_path):
    assert run_cli(["spectrum", "--config", CONFIGS / "threelevel_nonoise.toml",
                    "--out", tmp_path]) == 0
    _, rows = read_csv(tmp_path / "spectrum.csv")
    tags = {r[3] for r in rows[9:]}
    assert tags == {"original", "shifted"}


def test_evolve_spectral_vs_expm(tmp_path):
    d1, d2 = tmp_path / "s", tmp_path / "e"
    assert run_cli(["evolve", "--config", CONFIGS / "threelevel.toml",
                    "--method", "spectral", "--out", d1]) == 0
    assert run_cli(["evolve", "--config", CONFIGS / "threelevel.toml",
                    "--method", "expm", "--out", d2]) == 0
    h1, r1 = read_csv(d1 / "distances.csv")
    h2, r2 = read_csv(d2 / "distances.csv")
    assert h1 == h2
    a1 = np.array(r1, dtype=float)
    a2 = np.array(r2, dtype=float)
    assert np.abs(a1 - a2).max() < 1e-8
    for name in ("alpha", "beta", "phi", "psi"):
        assert (d1 / f"trajectory_{name}.csv").exists()
    first = (d1 / "trajectory_alpha.csv").read_text().splitlines()[0]
    assert first == "# method=spectral"


def test_evolve_mc_deterministic(tmp_path):
    d1, d2 = tmp_path / "m1", tmp_path / "m2"
    for d in (d1, d2):
        assert run_cli(["evolve", "--config", CONFIGS / "threelevel_mc.toml",
                        "--method", "mc", "--out", d]) == 0
    assert (d1 / "distances.csv").read_bytes() == (d2 / "distances.csv").read_bytes()


def test_evolve_mc_requires_config(tmp_path):
    rc = run_cli(["evolve", "--config", CONFIGS / "threelevel.toml",
                  "--method", "mc", "--out", tmp_path])
    assert rc == 2


def test_evolve_whitenoise_near_extended(tmp_path):
    d1, d2 = tmp_path / "wn", tmp_path / "ex"
    assert run_cli(["evolve", "--config", CONFIGS / "threelevel_whitenoise.toml",
                    "--method", "whitenoise", "--out", d1]) == 0
    assert run_cli(["evolve", "--config", CONFIGS / "threelevel_whitenoise.toml",
                    "--method", "expm", "--out", d2]) == 0
    _, r1 = read_csv(d1 / "distances.csv")
    _, r2 = read_csv(d2 / "distances.csv")
    a1 = np.array(r1, dtype=float)
    a2 = np.array(r2, dtype=float)
    assert np.abs(a1 - a2).max() < 2e-2


def test_mpemba_alpha_beta(tmp_path):
    assert run_cli(["mpemba", "--config", CONFIGS / "threelevel.toml",
                    "--out", tmp_path]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["case"] == "case2_strong_induce"
    assert len(report["crossings"]["rtn"]) == 1
    assert report["pair"] == ["alpha", "beta"]


def test_mpemba_phi_psi(tmp_path):
    assert run_cli(["mpemba", "--config", CONFIGS / "threelevel_phi_psi.toml",
                    "--out", tmp_path]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["case"] == "case3_eliminate"
    assert len(report["crossings"]["rtn"]) == 2


def test_mpemba_no_noise(tmp_path):
    assert run_cli(["mpemba", "--config", CONFIGS / "threelevel_nonoise.toml",
                    "--out", tmp_path]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["case"] == "none"
    assert len(report["crossings"]["free"]) == 0


def test_mpemba_rejects_wrong_state_count(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    text = (CONFIGS / "threelevel.toml").read_text()
    cfg.write_text(text.replace('pair = ["alpha", "beta"]', ""))
    rc = run_cli(["mpemba", "--config", cfg, "--out", tmp_path])
    assert rc == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "ConfigurationError"
    assert "two states" in err["message"]


def test_bad_schema_reports_json_error(tmp_path, capsys):
    cfg = tmp_path / "broken.toml"
    cfg.write_text('[system]\nhamiltonian = "nope"\n')
    rc = run_cli(["spectrum", "--config", cfg, "--out", tmp_path])
    assert rc == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "ConfigurationError"


def test_missing_config_file(tmp_path, capsys):
    rc = run_cli(["spectrum", "--config", tmp_path / "absent.toml",
                  "--out", tmp_path])
    assert rc == 2
    json.loads(capsys.readouterr().err.strip())


def test_scenario_writes_fixed_files(tmp_path):
    assert run_cli(["scenario", "--scenario", "fig1a", "--out", tmp_path]) == 0
    base = tmp_path / "fig1a"
    for name in ("distances.csv", "coherence.csv", "spectrum.csv", "report.json"):
        assert (base / name).exists(), name
    report = json.loads((base / "report.json").read_text())
    assert report["case"] == "case2_strong_induce"


def test_scenario_table2_writes_coefficients(tmp_path):
    assert run_cli(["scenario", "--scenario", "table2", "--out", tmp_path]) == 0
    header, rows = read_csv(tmp_path / "table2" / "coefficients.csv")
    assert header == ["state", "k", "re_C", "im_C", "abs_C"]
    assert len(rows) == 4 * 9


def test_norm_override(tmp_path):
    assert run_cli(["mpemba", "--config", CONFIGS / "threelevel.toml",
                    "--norm", "unique_elements", "--out", tmp_path]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["norm_kind"] == "unique_elements"
