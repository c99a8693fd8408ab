import json
import math

import numpy as np
import pytest

import spinboson.pencil
from spinboson import ConfigurationError, cli


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_defaults_from_empty_config():
    cfg = cli.parse_config("{}")
    assert cfg.model.eps == 1.0
    assert cfg.model.dimension == 1
    assert cfg.model.coupling.family == "sqrt-cutoff"
    assert cfg.model.dispersion.family == "abs-k"
    assert cfg.grid.n == 32 and cfg.grid.r_max == 4.0
    assert cfg.tolerances.root_tol == 1e-12
    assert cfg.tolerances.eig_tol == 1e-9
    assert cfg.tolerances.guard == 1e-8
    assert cfg.sweep.alpha_min == 0.0 and cfg.sweep.alpha_max == 100.0
    assert cfg.sweep.steps == 11 and cfg.sweep.log_spacing is False
    assert cfg.output.format == "csv" and cfg.output.path is None


@pytest.mark.parametrize(
    "doc,fragment",
    [
        ({"model": {"alpha": 1.0}}, "model.alpha"),
        ({"modle": {}}, "modle"),
        ({"grid": {"m": 4}}, "grid.m"),
        ({"model": {"coupling": {"cutoff": 1.0}}}, "model.coupling.cutoff"),
        ({"sweep": {"alphas": [1.0]}}, "sweep.alphas"),
    ],
)
def test_unknown_keys_rejected_by_path(doc, fragment):
    with pytest.raises(ConfigurationError, match=fragment.replace(".", r"\.")):
        cli.parse_config(json.dumps(doc))


@pytest.mark.parametrize(
    "doc",
    [
        "{not json",
        "[1, 2]",
        {"model": {"eps": "one"}},
        {"model": {"eps": -1.0}},
        {"model": {"dimension": 1.5}},
        {"grid": {"n": True}},
        {"grid": {"n": 0}},
        {"grid": 7},
        {"tolerances": {"guard": 0.5}},
        {"tolerances": {"root_tol": 0.0}},
        {"sweep": {"steps": 0}},
        {"sweep": {"alpha_min": -1.0}},
        {"sweep": {"alpha_min": 5.0, "alpha_max": 1.0}},
        {"sweep": {"alpha_min": 0.0, "log_spacing": True}},
        {"sweep": {"log_spacing": "yes"}},
        {"output": {"format": "yaml"}},
        {"model": {"coupling": {"table": []}}},
        {"model": {"coupling": {"table": [True]}}},
        {"model": {"coupling": {"family": "box"}}},
    ],
)
def test_invalid_configs_rejected(doc):
    text = doc if isinstance(doc, str) else json.dumps(doc)
    with pytest.raises(ConfigurationError):
        cli.parse_config(text)


def test_table_coupling_parses():
    cfg = cli.parse_config(
        json.dumps({"model": {"coupling": {"family": "table", "table": [1, 0.5]}}})
    )
    assert cfg.model.coupling.table == (1.0 + 0.0j, 0.5 + 0.0j)


def test_alpha_grid_spacing():
    lin = cli.alpha_grid(cli.SweepConfig(alpha_min=0.0, alpha_max=10.0, steps=3))
    assert lin == pytest.approx([0.0, 5.0, 10.0])
    log = cli.alpha_grid(
        cli.SweepConfig(alpha_min=1.0, alpha_max=100.0, steps=3, log_spacing=True)
    )
    assert log == pytest.approx([1.0, 10.0, 100.0])


@pytest.fixture(scope="module")
def small_rows():
    cfg = cli.parse_config(
        json.dumps({"grid": {"n": 8}, "sweep": {"alpha_min": 0.0, "alpha_max": 10.0, "steps": 4}})
    )
    return cli.cmd_sweep(cfg), cfg


def test_csv_header_layout():
    fields = cli.CSV_HEADER.split(",")
    assert len(fields) == 14
    assert fields[0] == "alpha" and fields[-1] == "flags"
    assert cli.rows_to_csv([]).strip() == cli.CSV_HEADER


def test_sweep_rows_shape(small_rows):
    rows, _ = small_rows
    assert len(rows) == 4
    assert rows[0].alpha == 0.0
    assert rows[0].kind_minus == "convention"
    assert math.isinf(rows[0].slope_ratio)
    assert "slope_ratio_undefined" in rows[0].flags
    assert rows[-1].kind_minus == "root"
    assert rows[-1].total == 2
    for row in rows:
        assert "," not in row.flags  # flags must never break the CSV layout


def test_sweep_deterministic(small_rows):
    rows, cfg = small_rows
    again = cli.cmd_sweep(cfg)
    assert cli.rows_to_csv(rows) == cli.rows_to_csv(again)


def test_csv_cells_roundtrip(small_rows):
    rows, _ = small_rows
    line = cli.rows_to_csv(rows).splitlines()[2]  # alpha = 10/3 row
    cells = line.split(",")
    assert float(cells[0]) == rows[1].alpha
    assert float(cells[1]) == rows[1].e_plus  # repr round-trips bit-exactly
    assert int(cells[5]) == rows[1].count_plus


def test_json_roundtrip(small_rows):
    rows, _ = small_rows
    assert cli.rows_from_json(cli.rows_to_json(rows)) == rows


def test_main_info_ok(tmp_path, capsys):
    path = write_config(tmp_path, {})
    assert cli.main(["info", "--config", path]) == 0
    out = capsys.readouterr().out
    assert "lambda_norm" in out
    assert "small_alpha_threshold" in out


def test_main_info_json(tmp_path, capsys):
    path = write_config(tmp_path, {})
    assert cli.main(["info", "--config", path, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["small_alpha_threshold"] == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize(
    "doc",
    ["{oops", {"model": {"eps": -2.0}}, {"grid": {"n": "many"}}, {"unknown": 1}],
)
def test_main_config_errors_exit_2(tmp_path, capsys, doc):
    path = write_config(tmp_path, doc)
    assert cli.main(["info", "--config", path]) == 2
    assert "error:" in capsys.readouterr().err


def test_main_missing_file_exit_2(tmp_path, capsys):
    assert cli.main(["info", "--config", str(tmp_path / "absent.json")]) == 2


def test_main_usage_errors(capsys):
    assert cli.main([]) == 2  # no subcommand
    assert cli.main(["sweep"]) == 2  # missing --config
    assert cli.main(["--help"]) == 0
    capsys.readouterr()


def test_main_sweep_writes_file(tmp_path):
    path = write_config(
        tmp_path, {"grid": {"n": 8}, "sweep": {"alpha_min": 1.0, "alpha_max": 2.0, "steps": 2}}
    )
    out = tmp_path / "rows.csv"
    assert cli.main(["sweep", "--config", path, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 3


def test_main_sweep_json_format(tmp_path, capsys):
    path = write_config(
        tmp_path, {"grid": {"n": 8}, "sweep": {"alpha_min": 1.0, "alpha_max": 2.0, "steps": 2}}
    )
    assert cli.main(["sweep", "--config", path, "--format", "json"]) == 0
    rows = cli.rows_from_json(capsys.readouterr().out)
    assert [r.alpha for r in rows] == [1.0, 2.0]


def test_main_verify_quick_passes(tmp_path, capsys):
    path = write_config(tmp_path, {"grid": {"n": 12}})
    assert cli.main(["verify", "--config", path, "--level", "quick"]) == 0
    out = capsys.readouterr().out
    assert "PASS elementary-inequality" in out
    assert "4/4 checks passed" in out


def test_main_verify_detects_tampering(tmp_path, capsys, monkeypatch):
    # break the kernel split; the closed-form check must go red and exit 1
    monkeypatch.setattr(
        spinboson.pencil, "kernel_psi2", lambda *a, **k: 0.123456
    )
    path = write_config(tmp_path, {"grid": {"n": 12}})
    assert cli.main(["verify", "--config", path, "--level", "quick"]) == 1
    out = capsys.readouterr().out
    assert "FAIL toy-closed-forms" in out


def test_main_threshold(tmp_path, capsys):
    path = write_config(
        tmp_path, {"grid": {"n": 16}, "sweep": {"alpha_min": 0.0, "alpha_max": 10.0}}
    )
    assert cli.main(["threshold", "--config", path, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["analytic_root_threshold"] == pytest.approx(1.0, rel=1e-12)
    # scan resolution is ~25 points per decade, so the onset lands within 10%
    assert payload["root_minus_from"] == pytest.approx(1.0, rel=0.11)
    # the split positivity is a strong-coupling fact; its onset sits near 1.9
    # here, one scan step of slack in either direction
    assert payload["margins_nonnegative_from"] == pytest.approx(1.905, rel=0.15)
    assert payload["total_at_most_two_from"] == 0.01


def test_threshold_rejects_decoupled(tmp_path, capsys):
    doc = {
        "grid": {"n": 4},
        "model": {"coupling": {"family": "table", "table": [0.0, 0.0, 0.0, 0.0]}},
    }
    path = write_config(tmp_path, doc)
    assert cli.main(["threshold", "--config", path]) == 2


def test_row_isolation_marks_errors():
    row = cli._row_for_alpha(
        cli.parse_config("{}").model, None, 1.0, cli.ToleranceConfig()
    )
    assert row.kind_minus == "error"
    assert row.count_plus == -1 and row.total == -1
    assert row.flags.startswith("error:")
    assert math.isnan(row.e_plus)
