"""Command-line front end: exit-code contract, JSON/CSV emission,
atomic --out writes, and config-file precedence."""

from __future__ import annotations

import csv
import json
import math
import subprocess
import sys

import pytest

from henonshift.cli import main


GOLDEN = {
    "vertices": ["0", "1"],
    "base": "0",
    "arrows": [["0", "0"], ["0", "1"], ["1", "0"]],
}


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload) if not isinstance(payload, str) else payload)
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def _run_json(capsys, argv):
    code, out = _run(capsys, argv)
    return code, (json.loads(out) if out.strip() else None)


# ---------------------------------------------------------------------------
# shift commands


def test_shift_entropy_golden_mean(tmp_path, capsys):
    g = _write(tmp_path, "g.json", GOLDEN)
    code, doc = _run_json(capsys, ["shift", "entropy", "--graph", g])
    assert code == 0
    assert doc["command"] == "shift entropy"
    assert doc["result"]["entropy"] == pytest.approx(math.log((1 + math.sqrt(5)) / 2), abs=1e-12)
    assert doc["config"]["graph"] == g
    assert "version" in doc and "timestamp" in doc


def test_shift_mme_stationary(tmp_path, capsys):
    g = _write(tmp_path, "g.json", GOLDEN)
    code, doc = _run_json(capsys, ["shift", "mme", "--graph", g])
    assert code == 0
    pi = doc["result"]["pi"]
    assert sum(pi.values()) == pytest.approx(1.0, abs=1e-12)
    phi = (1 + math.sqrt(5)) / 2
    assert pi["0"] == pytest.approx(phi**2 / (1 + phi**2), abs=1e-9)


def test_shift_spr_verdict_and_exit(tmp_path, capsys):
    g = _write(tmp_path, "g.json", GOLDEN)
    code, doc = _run_json(capsys, ["shift", "spr", "--graph", g])
    assert code == 0
    assert doc["result"]["is_spr"] is True
    # full shift: R = 1/2, R* = 1; margin 0.7 eats the log-2 gap and
    # flips the verdict along with the exit code
    full2 = {
        "vertices": ["0", "1"],
        "base": "0",
        "arrows": [[a, b] for a in "01" for b in "01"],
    }
    g2 = _write(tmp_path, "g2.json", full2)
    code2, doc2 = _run_json(
        capsys, ["shift", "spr", "--graph", g2, "--margin", "0.7"]
    )
    assert code2 == 2
    assert doc2["result"]["is_spr"] is False


def test_shift_fix_count(tmp_path, capsys):
    full2 = {
        "vertices": ["0", "1"],
        "base": "0",
        "arrows": [[a, b] for a in "01" for b in "01"],
    }
    g = _write(tmp_path, "g.json", full2)
    code, doc = _run_json(capsys, ["shift", "fix-count", "--graph", g, "--p", "10"])
    assert code == 0
    assert doc["result"]["count"] == 1024


def test_shift_equidist_threshold(tmp_path, capsys):
    g = _write(tmp_path, "g.json", GOLDEN)
    code, doc = _run_json(
        capsys,
        ["shift", "equidist", "--graph", g, "--p", "10", "--cylinder", "0,0"],
    )
    assert code == 0
    gap = abs(doc["result"]["empirical"] - doc["result"]["mme"])
    assert gap < 0.05
    code2, _ = _run_json(
        capsys,
        [
            "shift", "equidist", "--graph", g, "--p", "10",
            "--cylinder", "0,0", "--threshold", "1e-12",
        ],
    )
    assert code2 == 2


def test_shift_malformed_graph_reports_location(tmp_path, capsys):
    bad = _write(tmp_path, "bad.json", '{"vertices": ["0"],\n  "base" "0"}')
    code = main(["shift", "entropy", "--graph", bad])
    err = capsys.readouterr().err
    assert code == 1
    assert "line 2" in err and "column" in err


def test_shift_disconnected_graph_analysis_error(tmp_path, capsys):
    g = _write(
        tmp_path,
        "g.json",
        {"vertices": ["0", "1"], "base": "0", "arrows": [["0", "1"]]},
    )
    code = main(["shift", "entropy", "--graph", g])
    assert code == 2


# ---------------------------------------------------------------------------
# orbit commands


def test_orbits_census_json(capsys):
    code, doc = _run_json(
        capsys, ["orbits", "census", "--a", "-2.0", "--p", "3", "--no-timestamp"]
    )
    assert code == 0
    assert doc["result"]["count_fix"] == 8
    assert doc["result"]["p"] == 3
    assert "timestamp" not in doc


def test_orbits_census_csv(tmp_path, capsys):
    out = tmp_path / "census.csv"
    code = main(
        [
            "orbits", "census", "--a", "-2.0", "--p", "3",
            "--format", "csv", "--out", str(out),
        ]
    )
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["p", "least_period", "x", "y", "mult1", "mult2", "residual"]
    assert sum(int(r[1]) for r in rows[1:]) == 8


def test_orbits_census_refine_flag(capsys):
    code, doc = _run_json(
        capsys,
        [
            "orbits", "census", "--a", "-1.99", "--b", "1e-6", "--p", "4",
            "--grid", "128x4", "--refine-check",
        ],
    )
    assert code == 0
    assert doc["result"]["stable"] is True
    assert doc["config"]["refine_check"] is True


def test_orbits_entropy_fit(capsys):
    code, doc = _run_json(
        capsys,
        ["orbits", "entropy", "--a", "-2.0", "--p-min", "1", "--p-max", "6"],
    )
    assert code == 0
    assert doc["result"]["slope"] == pytest.approx(math.log(2.0), abs=1e-9)


def test_orbits_equidist_threshold_exit(capsys):
    code, doc = _run_json(
        capsys,
        [
            "orbits", "equidist", "--a", "-2.0", "--p", "10",
            "--statistic", "KS", "--threshold", "0.05",
        ],
    )
    assert code == 0
    assert doc["result"]["distance"] < 0.05
    code2, _ = _run_json(
        capsys,
        [
            "orbits", "equidist", "--a", "-2.0", "--p", "10",
            "--statistic", "KS", "--threshold", "1e-9",
        ],
    )
    assert code2 == 2


def test_orbits_equidist_rejects_unknown_reference(capsys):
    code = main(
        ["orbits", "equidist", "--a", "-2.0", "--p", "8", "--reference", "uniform"]
    )
    assert code == 1


# ---------------------------------------------------------------------------
# stats commands


def test_stats_mixing_requires_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["stats", "mixing", "--n", "1000"])
    assert exc.value.code == 1


def test_stats_mixing_csv_fit_column(tmp_path, capsys):
    out = tmp_path / "mix.csv"
    code = main(
        [
            "stats", "mixing", "--seed", "3", "--n", "200000",
            "--g", "bump:0,1", "--h", "bump:0,1", "--n-max", "6",
            "--format", "csv", "--out", str(out),
        ]
    )
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["lag", "cov", "fit"]
    assert len(rows) == 7


def test_stats_clt_json(capsys):
    code, doc = _run_json(
        capsys,
        [
            "stats", "clt", "--seed", "42", "--sample-n", "100000",
            "--n", "1024", "--trials", "600",
        ],
    )
    assert code == 0
    assert doc["result"]["passed"] is True
    assert doc["result"]["sigma_hat"] == pytest.approx(math.sqrt(2.0), abs=0.15)


def test_stats_clt_coboundary_degenerate_exit_zero(capsys):
    code, doc = _run_json(
        capsys,
        [
            "stats", "clt", "--seed", "7", "--sample-n", "60000",
            "--n", "1024", "--trials", "600", "--psi", "coboundary",
        ],
    )
    assert code == 0
    assert doc["result"]["degenerate"] is True


def test_stats_boxdim_cantor(capsys):
    code, doc = _run_json(
        capsys,
        ["stats", "boxdim", "--set", "cantor", "--n", "200000", "--seed", "5"],
    )
    assert code == 0
    assert doc["result"]["dimension"] == pytest.approx(
        math.log(2) / math.log(3), abs=0.05
    )


def test_stats_boxdim_points_file(tmp_path, capsys):
    import numpy as np

    rng = np.random.default_rng(0)
    pts = rng.random((20000, 2))
    path = tmp_path / "pts.csv"
    np.savetxt(path, pts, delimiter=",")
    code, doc = _run_json(capsys, ["stats", "boxdim", "--points", str(path)])
    assert code == 0
    assert doc["result"]["dimension"] == pytest.approx(2.0, abs=0.1)


def test_stats_boxdim_needs_exactly_one_source(capsys):
    code = main(["stats", "boxdim"])
    assert code == 1


def test_stats_return_decay_model_route(tmp_path, capsys):
    model = _write(tmp_path, "m.json", {"M": 100, "b": 1e-8, "model": "full"})
    code, doc = _run_json(
        capsys, ["stats", "return-decay", "--model", model, "--horizon", "60"]
    )
    assert code == 0
    assert doc["result"]["exponential"] is True


# ---------------------------------------------------------------------------
# plumbing: output files, config files, idempotence


def test_out_is_atomic_and_idempotent(tmp_path):
    g = _write(tmp_path, "g.json", GOLDEN)
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        code = main(
            ["shift", "entropy", "--graph", g, "--out", str(out), "--no-timestamp"]
        )
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert not list(tmp_path.glob("*.tmp*"))


def test_config_file_defaults_and_precedence(tmp_path, capsys):
    g = _write(tmp_path, "g.json", GOLDEN)
    cfg = _write(tmp_path, "cfg.json", {"horizon": 32, "margin": 0.01})
    code, doc = _run_json(capsys, ["shift", "spr", "--graph", g, "--config", cfg])
    assert code == 0
    assert doc["config"]["horizon"] == 32
    assert doc["config"]["margin"] == 0.01
    # explicit flag beats the config value
    code2, doc2 = _run_json(
        capsys,
        ["shift", "spr", "--graph", g, "--config", cfg, "--horizon", "48"],
    )
    assert code2 == 0
    assert doc2["config"]["horizon"] == 48
    assert doc2["config"]["margin"] == 0.01


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    g = _write(tmp_path, "g.json", GOLDEN)
    cfg = _write(tmp_path, "cfg.json", {"no_such_flag": 1})
    code = main(["shift", "entropy", "--graph", g, "--config", cfg])
    err = capsys.readouterr().err
    assert code == 1
    assert "no_such_flag" in err


def test_version_embedded_matches_package(tmp_path, capsys):
    import henonshift

    g = _write(tmp_path, "g.json", GOLDEN)
    code, doc = _run_json(capsys, ["shift", "entropy", "--graph", g])
    assert code == 0
    assert doc["version"] == henonshift.__version__


def test_console_script_installed():
    r = subprocess.run(
        ["henonshift", "--version"], capture_output=True, text=True
    )
    assert r.returncode == 0
    import henonshift

    assert henonshift.__version__ in r.stdout


def test_module_entry_point(tmp_path):
    g = _write(tmp_path, "g.json", GOLDEN)
    r = subprocess.run(
        [sys.executable, "-m", "henonshift.cli", "shift", "entropy", "--graph", g],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0
    assert json.loads(r.stdout)["result"]["entropy"] == pytest.approx(0.4812118250596, abs=1e-9)
