"""End-to-end tests of the command-line interface."""

import json
import math

import pytest

from dlw.cli import main
from dlw.scenario import CSV_HEADER


def base_config(**overrides):
    config = {
        "branch": "plus",
        "solution_path": "transform",
        "seed": {
            "kind": "kernels",
            "constant": 1.0,
            "kernels": [{"amplitude": 1.0, "a": "1", "b": "1*y"}],
        },
        "grid": {"x": [-1.0, 1.0, 4], "y": [-1.0, 1.0, 3], "t": [0.0, 0.5, 2]},
        "stencil": {"step": 5e-3},
        "thresholds": {"max_residual": 1e-5},
        "outputs": [],
    }
    config.update(overrides)
    return config


def write_config(tmp_path, config, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(config))
    return str(path)


def read_csv(path):
    lines = path.read_text().splitlines()
    header, rows = lines[0], [line.split(",") for line in lines[1:]]
    return header, rows


# -- derive ------------------------------------------------------------------------


def test_derive_passes_and_prints_key_facts(capsys):
    assert main(["derive"]) == 0
    out = capsys.readouterr().out
    assert "(l,m,n,p,q,r) = (1,0,0,1,1,0)" in out
    assert "A = -1" in out
    assert out.count("PASS") == 2
    assert "branch plus" in out and "branch minus" in out


def test_derive_is_byte_identical_across_runs(capsys):
    main(["derive"])
    first = capsys.readouterr().out
    main(["derive"])
    second = capsys.readouterr().out
    assert first == second


def test_derive_json_export(tmp_path, capsys):
    target = tmp_path / "derivation.json"
    assert main(["derive", "--output", str(target)]) == 0
    capsys.readouterr()
    payload = json.loads(target.read_text())
    assert payload["exponents"] == {"l": 1, "m": 0, "n": 0, "p": 1, "q": 1, "r": 0}
    assert payload["branches"]["plus"]["passed"] is True
    assert payload["branches"]["minus"]["passed"] is True


# -- run ---------------------------------------------------------------------------


def test_run_verifies_and_exports(tmp_path, capsys):
    csv_path = tmp_path / "grid.csv"
    config = base_config(outputs=[{"format": "csv", "path": str(csv_path)}])
    code = main(["run", write_config(tmp_path, config)])
    captured = capsys.readouterr()
    assert code == 0
    assert "verdict: PASS" in captured.out
    assert "skipped 0 pole-adjacent points" in captured.err
    header, rows = read_csv(csv_path)
    assert header == CSV_HEADER
    assert len(rows) == 4 * 3 * 2
    assert all(len(row) == 8 for row in rows)


def test_run_csv_bytes_reproducible(tmp_path, capsys):
    csv_path = tmp_path / "grid.csv"
    config = base_config(outputs=[{"format": "csv", "path": str(csv_path)}])
    path = write_config(tmp_path, config)
    assert main(["run", path]) == 0
    first = csv_path.read_bytes()
    assert main(["run", path]) == 0
    capsys.readouterr()
    assert csv_path.read_bytes() == first


def test_run_fails_on_corrupted_fields(tmp_path, capsys):
    config = base_config(debug={"perturb_h": 0.01})
    assert main(["run", write_config(tmp_path, config)]) == 1
    assert "verdict: FAIL" in capsys.readouterr().out


def test_run_rejects_bad_expression_with_offset(tmp_path, capsys):
    config = base_config()
    config["seed"]["kernels"][0]["a"] = "tanj(y)"
    assert main(["run", write_config(tmp_path, config)]) == 2
    err = capsys.readouterr().err
    assert "unknown function" in err
    assert "offset 0" in err


def test_run_rejects_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"branch": "plus",')
    assert main(["run", str(path)]) == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_run_rejects_missing_sections(tmp_path, capsys):
    config = base_config()
    del config["grid"]
    assert main(["run", write_config(tmp_path, config)]) == 2
    assert "missing key 'grid'" in capsys.readouterr().err


def test_run_threshold_override_turns_failure(tmp_path, capsys):
    config = base_config()
    path = write_config(tmp_path, config)
    assert main(["run", path, "--threshold", "1e-12"]) == 1
    capsys.readouterr()


def test_run_branch_and_step_overrides(tmp_path, capsys):
    config = base_config()
    path = write_config(tmp_path, config)
    assert main(["run", path, "--branch", "minus", "--step", "0.0025"]) == 0
    out = capsys.readouterr().out
    assert "branch minus" in out
    assert "step 0.0025" in out


def test_run_output_flag_adds_csv(tmp_path, capsys):
    config = base_config()
    target = tmp_path / "extra.csv"
    assert main(["run", write_config(tmp_path, config), "--output", str(target)]) == 0
    capsys.readouterr()
    header, rows = read_csv(target)
    assert header == CSV_HEADER
    assert len(rows) == 24


def test_vacuum_scenario_rows(tmp_path, capsys):
    csv_path = tmp_path / "vacuum.csv"
    config = base_config(
        seed={"kind": "constant", "constant": 2.0},
        grid={"x": [0.0, 1.0, 2], "y": [0.0, 1.0, 2], "t": [0.0, 0.0, 1]},
        outputs=[{"format": "csv", "path": str(csv_path)}],
    )
    assert main(["run", write_config(tmp_path, config)]) == 0
    capsys.readouterr()
    _, rows = read_csv(csv_path)
    assert len(rows) == 4
    for row in rows:
        assert float(row[3]) == 2.0  # phi
        assert float(row[4]) == 0.0  # u
        assert float(row[5]) == -1.0  # h
        assert float(row[6]) == 0.0 and float(row[7]) == 0.0


def test_pole_crossing_scenario_reports_skips_and_nan_rows(tmp_path, capsys):
    csv_path = tmp_path / "poles.csv"
    config = base_config(
        seed={"kind": "poly", "poly": {"c2": "1", "c1": "0", "c0": "0"}},
        grid={"x": [-1.0, 1.0, 11], "y": [-1.0, 1.0, 3], "t": [0.0, 1.0, 3]},
        outputs=[{"format": "csv", "path": str(csv_path)}],
    )
    assert main(["run", write_config(tmp_path, config)]) == 0
    err = capsys.readouterr().err
    assert "skipped" in err
    skipped = int(err.split("skipped ")[1].split()[0])
    assert skipped > 0
    _, rows = read_csv(csv_path)
    nan_rows = [row for row in rows if row[4] == "nan"]
    assert len(nan_rows) == skipped
    for row in nan_rows:
        assert row[5] == row[6] == row[7] == "nan"
        assert math.isfinite(float(row[3]))  # phi stays numeric


def test_csv_roundtrip_matches_report(tmp_path, capsys):
    csv_path = tmp_path / "grid.csv"
    report_path = tmp_path / "report.json"
    config = base_config(
        outputs=[
            {"format": "csv", "path": str(csv_path)},
            {"format": "report", "path": str(report_path)},
        ]
    )
    assert main(["run", write_config(tmp_path, config)]) == 0
    capsys.readouterr()
    _, rows = read_csv(csv_path)
    max1 = max(abs(float(row[6])) for row in rows if row[6] != "nan")
    max2 = max(abs(float(row[7])) for row in rows if row[7] != "nan")
    payload = json.loads(report_path.read_text())
    assert payload["verified"] is True
    assert abs(max1 - payload["report"]["max_abs"][0]) <= 1e-12
    assert abs(max2 - payload["report"]["max_abs"][1]) <= 1e-12
    assert payload["report"]["skipped"] == 0


# -- alternate solution paths ---------------------------------------------------------


def test_exact_path_runs(tmp_path, capsys):
    config = base_config(solution_path="exact")
    assert main(["run", write_config(tmp_path, config)]) == 0
    capsys.readouterr()


def test_exact_path_requires_unit_kernel(tmp_path, capsys):
    config = base_config(solution_path="exact")
    config["seed"]["kernels"][0]["amplitude"] = 2.0
    assert main(["run", write_config(tmp_path, config)]) == 2
    assert "exact" in capsys.readouterr().err


def test_exact_const_path(tmp_path, capsys):
    config = base_config(solution_path="exact-const")
    del config["seed"]
    config["params"] = {"a": 1.0, "c": 1.0, "d": 0.0}
    assert main(["run", write_config(tmp_path, config)]) == 0
    capsys.readouterr()


# -- reduce -----------------------------------------------------------------------------


def test_reduce_passes(capsys):
    assert main(["reduce", "1.0", "0.0"]) == 0
    out = capsys.readouterr().out
    assert "verdict: PASS" in out


def test_reduce_minus_branch(capsys):
    assert main(["reduce", "0.8", "0.2", "--branch", "minus"]) == 0
    capsys.readouterr()


def test_reduce_tight_threshold_fails(capsys):
    assert main(["reduce", "1.0", "0.0", "--threshold", "1e-12"]) == 1
    capsys.readouterr()


def test_reduce_csv_export(tmp_path, capsys):
    target = tmp_path / "reduce.csv"
    assert main(["reduce", "1.0", "0.0", "--nz", "5", "--output", str(target)]) == 0
    capsys.readouterr()
    header, rows = read_csv(target)
    assert header == CSV_HEADER
    assert len(rows) == 5 * 5  # nz * nt


# -- sweep ------------------------------------------------------------------------------


def test_sweep_runs_all_entries(tmp_path, capsys):
    config = base_config()
    config["sweep"] = [
        {"branch": "plus"},
        {"branch": "minus"},
        {"seed": {"kernels": [{"amplitude": 1.0, "a": "1.3", "b": "0.5*y"}]}},
    ]
    assert main(["sweep", write_config(tmp_path, config)]) == 0
    out = capsys.readouterr().out
    assert out.count("verdict: PASS") == 3


def test_sweep_fails_if_any_entry_fails(tmp_path, capsys):
    config = base_config()
    config["sweep"] = [{}, {"debug": {"perturb_h": 0.01}}]
    assert main(["sweep", write_config(tmp_path, config)]) == 1
    out = capsys.readouterr().out
    assert "verdict: PASS" in out and "verdict: FAIL" in out


def test_sweep_requires_list(tmp_path, capsys):
    assert main(["sweep", write_config(tmp_path, base_config())]) == 2
    assert "sweep" in capsys.readouterr().err


# -- argparse surface ---------------------------------------------------------------------


def test_missing_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
    capsys.readouterr()


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["derive", "--nope"])
    assert err.value.code == 2
    capsys.readouterr()
