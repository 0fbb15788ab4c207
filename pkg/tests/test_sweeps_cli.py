import json

import numpy as np
import pytest

from polaract._csvio import read_csv
from polaract.cli import EXIT_CONFIG, EXIT_OK, main
from polaract.sweeps import ConfigError, SweepConfig, run_sweep


def read_bytes(folder):
    return {p.name: p.read_bytes() for p in sorted(folder.iterdir())}


def test_erasure_sweep_anchor(tmp_path):
    res = run_sweep(SweepConfig("erasure", out=str(tmp_path)))
    meta, cols, rows = read_csv(tmp_path / "erasure.csv")
    assert meta["experiment"] == "erasure"
    assert cols == ["p", "c_sym_star", "p_private"]
    assert len(rows) == 101
    row = next(r for r in rows if r[0] == "0.45")
    assert float(row[1]) == pytest.approx(0.55, abs=1e-12)
    assert float(row[2]) == pytest.approx(0.10, abs=1e-12)
    assert res.summary["rows"] == 101


@pytest.mark.parametrize("experiment, config, expected_rows", [
    ("erasure", {"p": (0.0, 0.5, 1.0)}, 3),
    ("polarize", {"p": (0.3, 0.5), "k": (2, 4, 6)}, 6),
    ("privacy", {"k": (1, 2, 3, 8)}, 4),
    ("eve", {"p_eve": (0.05, 0.4, 0.9), "k": (6, 8)}, 6),
    ("fidelity-region", {"f_step": 0.25}, 25),
    ("bler", {"k": (4, 6), "trials": 200, "seed": 3, "rate": (0.3, 0.5)}, 4),
])
def test_rows_match_grid_and_header_is_versioned(tmp_path, experiment, config, expected_rows):
    res = run_sweep(SweepConfig(experiment, out=str(tmp_path), **config))
    main_csv = tmp_path / f"{experiment}.csv"
    first = main_csv.read_text(encoding="utf-8").splitlines()[0]
    assert first.startswith("# polaract-csv schema=1 ")
    _, _, rows = read_csv(main_csv)
    assert len(rows) == expected_rows
    for path in res.files:
        data = path.read_bytes()
        assert b"\r" not in data and data.endswith(b"\n")
    summary = json.loads((tmp_path / f"{experiment}_summary.json").read_text())
    assert summary["experiment"] == experiment and summary["schema"] == 1


@pytest.mark.parametrize("experiment", ["erasure", "polarize", "privacy", "eve", "fidelity-region", "bler"])
def test_sweeps_are_byte_identical(tmp_path, experiment):
    cfg = {"k": (2, 5)} if experiment in ("polarize", "privacy", "eve") else {}
    if experiment == "bler":
        cfg = {"k": (4, 6), "trials": 300, "seed": 99}
    a, b = tmp_path / "a", tmp_path / "b"
    run_sweep(SweepConfig(experiment, out=str(a), **cfg))
    run_sweep(SweepConfig(experiment, out=str(b), **cfg))
    assert read_bytes(a) == read_bytes(b)


def test_privacy_summary_equals_index_column_sums(tmp_path):
    res = run_sweep(SweepConfig("privacy", out=str(tmp_path), k=(3, 6, 9, 12), index_max_k=9))
    for k in (3, 6, 9):
        _, cols, rows = read_csv(tmp_path / f"privacy_index_k{k}.csv")
        sums = {c: sum(int(r[cols.index(c)]) for r in rows) for c in ("S_in", "P1", "P2", "B")}
        assert sums == res.summary["counts"][str(k)]
    assert not (tmp_path / "privacy_index_k12.csv").exists()
    assert sum(res.summary["counts"]["12"].values()) == 4096


def test_privacy_rate_mode_reaches_asymptote(tmp_path):
    run_sweep(SweepConfig("privacy", out=str(tmp_path), k=(16,), mode="rate"))
    _, cols, rows = read_csv(tmp_path / "privacy.csv")
    assert float(rows[0][cols.index("S_in")]) == pytest.approx(0.6, abs=0.01)


def test_fidelity_region_flag(tmp_path):
    run_sweep(SweepConfig("fidelity-region", out=str(tmp_path), f_step=0.5))
    _, cols, rows = read_csv(tmp_path / "fidelity-region.csv")
    flags = {(float(r[0]), float(r[1])): r[cols.index("sum_below_one")] for r in rows}
    assert flags[(0.0, 0.5)] == "1" and flags[(0.5, 0.5)] == "0"


def test_eve_regimes(tmp_path):
    run_sweep(SweepConfig("eve", out=str(tmp_path), k=(8,), p_bob=0.2, p_eve=(0.1, 0.2, 0.6)))
    _, cols, rows = read_csv(tmp_path / "eve.csv")
    assert [r[cols.index("regime")] for r in rows] == ["non-degraded", "degraded", "degraded"]


@pytest.mark.parametrize("cfg, match", [
    ({"experiment": "bler"}, "needs --seed"),
    ({"experiment": "polarize", "k": (21,)}, "allow-large"),
    ({"experiment": "bler", "k": (13,), "seed": 1}, "allow-large"),
    ({"experiment": "erasure", "p": ()}, "empty"),
    ({"experiment": "erasure", "p": (1.5,)}, "outside"),
    ({"experiment": "privacy", "beta": 0.5}, "beta"),
    ({"experiment": "nonsense"}, "unknown experiment"),
])
def test_invalid_configs(tmp_path, cfg, match):
    with pytest.raises(ConfigError, match=match):
        run_sweep(SweepConfig.from_mapping({**cfg, "out": str(tmp_path)}))


def test_allow_large_lifts_cap():
    cfg = SweepConfig("polarize", k=(21,), allow_large=True).resolved()
    assert cfg.k == (21,)


def test_from_mapping_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        SweepConfig.from_mapping({"experiment": "erasure", "colour": "red"})


# CLI

def test_cli_sweep_with_config_file_and_override(tmp_path, capsys):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"experiment": "erasure", "p": [0.1, 0.2], "d": 4, "out": str(tmp_path / "x")}))
    assert main(["sweep", "--config", str(conf), "--d", "2"]) == EXIT_OK
    meta, _, rows = read_csv(tmp_path / "x" / "erasure.csv")
    assert meta["d"] == "2" and len(rows) == 2
    assert "erasure.csv" in capsys.readouterr().out


def test_cli_k_ranges(tmp_path):
    assert main(["sweep", "polarize", "--k", "2:6:2", "--p", "0.5", "--out", str(tmp_path)]) == EXIT_OK
    _, _, rows = read_csv(tmp_path / "polarize.csv")
    assert [r[1] for r in rows] == ["2", "4", "6"]


@pytest.mark.parametrize("argv", [
    ["sweep", "bler", "--k", "6"],
    ["sweep", "polarize", "--k", "22"],
    ["sweep", "erasure", "--config", "/nonexistent/conf.json"],
    ["simulate", "--k", "6", "--rate", "0.5"],
    ["simulate", "--k", "6", "--rate", "0.5", "--seed", "-4"],
    ["simulate", "--k", "13", "--rate", "0.5", "--seed", "1"],
    ["simulate", "--channel", "erasure", "--k", "6", "--rate", "0.5", "--seed", "1"],
    ["evolve", "--k", "30"],
    ["capacity", "--channel", "bec", "--p", "1.4"],
    ["check-polaractivation", "--c-sym", "0.3", "--c-sym-star", "1.0"],
    ["frobnicate"],
])
def test_cli_config_errors_exit_2(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "polaract:" in capsys.readouterr().err


def test_cli_bad_config_json(tmp_path):
    conf = tmp_path / "broken.json"
    conf.write_text("{not json")
    assert main(["sweep", "--config", str(conf)]) == EXIT_CONFIG


def test_cli_runtime_error_exit_3(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["sweep", "erasure", "--out", str(blocker / "sub")]) == 3


def test_cli_evolve(tmp_path):
    out = tmp_path / "prof.csv"
    assert main(["evolve", "--channel", "bec", "--p", "0.5", "--k", "2", "--out", str(out)]) == EXIT_OK
    meta, cols, rows = read_csv(out)
    assert meta["seed"] == "0.5" and cols == ["index", "z", "good"]
    assert [r[2] for r in rows] == ["0", "0", "0", "1"]


def test_cli_partition(tmp_path, capsys):
    out = tmp_path / "part.csv"
    assert main(["partition", "--p-amp", "0.2", "--p-phase", "0.2", "--k", "6", "--out", str(out)]) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    _, _, rows = read_csv(out)
    cells = [r[1] for r in rows]
    assert {c: cells.count(c) for c in ("S_in", "P1", "P2", "B")} == summary["counts"]
    assert json.loads(out.with_suffix(".json").read_text()) == summary


def test_cli_capacity(capsys):
    assert main(["capacity", "--channel", "erasure", "--p", "0.45"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["c_sym_star"] == pytest.approx(0.55) and report["p_private"] == pytest.approx(0.10)
    assert main(["capacity", "--channel", "pauli", "--p-z", "0.1", "--p-x", "0.1"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["f_z"] == pytest.approx(0.6) and report["sum_below_one"] is False


def test_cli_simulate(tmp_path, capsys):
    argv = ["simulate", "--channel", "bsc", "--p", "0.05", "--k", "7", "--rate", "0.4", "--trials", "400",
            "--seed", "0x2a", "--out", str(tmp_path / "run")]
    assert main(argv) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["seed"] == 42 and report["trials"] == 400
    _, cols, rows = read_csv(tmp_path / "run.csv")
    assert int(rows[0][cols.index("errors")]) == report["block_errors"]


def test_cli_check_polaractivation(capsys):
    assert main(["check-polaractivation", "--c-sym", "0.3", "--c-low", "0.83", "--c-sym-star", "1.0"]) == EXIT_OK
    status = json.loads(capsys.readouterr().out)
    assert status["state"] == "blocked" and status["activatable"] is True
    assert status["delta_min"] == pytest.approx(0.53)
    argv = ["check-polaractivation", "--c-sym", "0.3", "--c-sym-star", "1.0", "--f-z", "0.9", "--f-x", "0.0"]
    assert main(argv) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["c_low"] == pytest.approx(1.0)


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "polaract", "capacity", "--channel", "bec", "--p", "0.3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["capacity"] == pytest.approx(0.7)


def test_csv_values_round_trip(tmp_path):
    run_sweep(SweepConfig("polarize", out=str(tmp_path), p=(0.3,), k=(10,)))
    _, cols, rows = read_csv(tmp_path / "polarize.csv")
    from polaract.evolution import evolve

    assert float(rows[0][cols.index("frac_below_eps")]) == float(np.mean(evolve(0.3, 10).z < 1e-9))
