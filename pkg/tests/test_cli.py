import json

import numpy as np
import pytest

from qpwave.cli import main
from qpwave.reports import format_float, render_json, validate_config, Key
from qpwave.errors import UsageError


def run(args):
    return main(list(args))


# ---------------------------------------------------------------------------
# report rendering


def test_format_float_fifteen_digits():
    assert format_float(np.pi) == "3.14159265358979"
    assert format_float(1.0) == "1.0"
    assert format_float(1e-8) == "1e-08"


def test_render_json_deterministic():
    obj = {"b": 1.0, "a": [1, 2.5, {"x": True}], "c": None}
    assert render_json(obj) == render_json(obj)
    assert render_json(obj).index('"b"') < render_json(obj).index('"a"')


def test_validate_config_rejects_unknown_keys():
    schema = {"a": Key(int, default=1)}
    with pytest.raises(UsageError):
        validate_config({"a": 2, "oops": 3}, schema)
    assert validate_config({}, schema) == {"a": 1}
    with pytest.raises(UsageError):
        validate_config({"a": "nope"}, schema)


# ---------------------------------------------------------------------------
# verification subcommands


def test_constants_passes(tmp_path, capsys):
    out = tmp_path / "constants.json"
    assert run(["constants", "--json", str(out)]) == 0
    text = capsys.readouterr().out
    assert "PASS" in text
    assert "FLAG" in text          # the two quoted-interval rows
    assert "FAIL" not in text
    data = json.loads(out.read_text())
    assert data["passed"] is True
    flags = [r["name"] for r in data["rows"] if r["status"] == "FLAG"]
    assert set(flags) == {"<beta^2>", "<cn^2>"}


def test_constants_report_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["constants", "--json", str(a)]) == 0
    assert run(["constants", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_lemma3_passes(tmp_path, capsys):
    out = tmp_path / "lemma3.json"
    assert run(["lemma3", "--json", str(out)]) == 0
    text = capsys.readouterr().out
    for i in range(1, 13):
        assert f"L{i}" in text
    data = json.loads(out.read_text())
    assert data["passed"] is True
    assert len(data["identity_residuals"]) == 12


def test_nondegeneracy_passes(tmp_path):
    out = tmp_path / "nd.json"
    assert run(["nondegeneracy", "--modes", "16", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["passed"] is True
    assert min(data["sigma_min"].values()) > 1e-3


# ---------------------------------------------------------------------------
# divisor scan


def write_config(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def test_divisor_scan_accepts_good_number(tmp_path):
    cfg = write_config(tmp_path / "scan.json", {
        "gamma": 0.1,
        "x": {"quotients": [5] * 40},
        "n_max": 100,
    })
    out = tmp_path / "scan_report.json"
    assert run(["divisor-scan", cfg, "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["passed"] is True
    assert data["min_divisor"] > 0.1
    assert sum(data["case_histogram"].values()) == (2 * 100) ** 2


def test_divisor_scan_rational_fails(tmp_path, capsys):
    cfg = write_config(tmp_path / "scan.json", {
        "gamma": 0.1,
        "x": {"value": 0.1},
        "n_max": 50,
    })
    out = tmp_path / "scan_report.json"
    assert run(["divisor-scan", cfg, "--json", str(out)]) == 1
    data = json.loads(out.read_text())
    assert data["passed"] is False
    assert data["min_divisor"] < 1e-10
    assert "witness_m" in data and "witness_n" in data
    assert "FAIL" in capsys.readouterr().out


def test_divisor_scan_unknown_key_exits_2(tmp_path):
    cfg = write_config(tmp_path / "scan.json", {
        "gamma": 0.1,
        "x": {"quotients": [5] * 40},
        "bogus": 1,
    })
    assert run(["divisor-scan", cfg]) == 2


def test_divisor_scan_missing_file_exits_2(tmp_path):
    assert run(["divisor-scan", str(tmp_path / "absent.json")]) == 2


def test_counter_variant_scan(tmp_path):
    cfg = write_config(tmp_path / "scan.json", {
        "variant": "counter-propagating",
        "gamma": 0.1,
        "x": {"quotients": [7] * 40},
        "y": {"quotients": [6] * 40},
        "n_max": 60,
    })
    assert run(["divisor-scan", cfg]) == 0


# ---------------------------------------------------------------------------
# solve and sample


SOLVE_PAYLOAD = {
    "gamma": 0.1,
    "x_quotients": [200] + [5] * 39,
    "weights": {"sigma": 0.05, "s": 2.0, "N": 16},
    "samples": {"t_max": 5.0, "nt": 8, "nx": 8},
}


def test_solve_writes_outputs(tmp_path, capsys):
    cfg = write_config(tmp_path / "solve.json", SOLVE_PAYLOAD)
    sol_path = tmp_path / "sol.json"
    rep_path = tmp_path / "report.json"
    csv_path = tmp_path / "samples.csv"
    code = run(["solve", cfg, "--out", str(sol_path), "--json", str(rep_path),
                "--samples", str(csv_path)])
    assert code == 0
    assert "PASS" in capsys.readouterr().out

    report = json.loads(rep_path.read_text())
    assert report["passed"] is True
    assert report["residual_norm"] < 1e-8

    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "t,x,v"
    assert len(lines) == 1 + 8 * 8

    data = json.loads(sol_path.read_text())
    assert data["variant"] == "co-propagating"


def test_solve_report_byte_stable(tmp_path):
    cfg = write_config(tmp_path / "solve.json", SOLVE_PAYLOAD)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["solve", cfg, "--json", str(a)]) == 0
    assert run(["solve", cfg, "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_from_solution_file(tmp_path):
    cfg = write_config(tmp_path / "solve.json", SOLVE_PAYLOAD)
    sol_path = tmp_path / "sol.json"
    assert run(["solve", cfg, "--out", str(sol_path)]) == 0
    csv_path = tmp_path / "resampled.csv"
    assert run(["sample", str(sol_path), "--t0", "0", "--t1", "2",
                "--nt", "5", "--nx", "4", "--out", str(csv_path)]) == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "t,x,v"
    assert len(lines) == 1 + 5 * 4
    # values parse back as floats
    t, x, v = lines[1].split(",")
    float(t), float(x), float(v)


def test_figures_written(tmp_path):
    figdir = tmp_path / "figs"
    assert run(["constants", "--figures", str(figdir)]) == 0
    assert (figdir / "profile.png").exists()

    cfg = write_config(tmp_path / "scan.json", {
        "gamma": 0.1,
        "x": {"quotients": [5] * 40},
        "n_max": 60,
    })
    assert run(["divisor-scan", cfg, "--figures", str(figdir)]) == 0
    assert (figdir / "divisor_scan.png").exists()

    solve_cfg = write_config(tmp_path / "solve.json", SOLVE_PAYLOAD)
    csv_path = tmp_path / "s.csv"
    assert run(["solve", solve_cfg, "--samples", str(csv_path),
                "--figures", str(figdir)]) == 0
    assert (figdir / "solution.png").exists()
    assert (figdir / "samples.png").exists()


def test_solve_with_quartic_nonlinearity(tmp_path):
    payload = dict(SOLVE_PAYLOAD)
    payload["nonlinearity"] = [0, 0, 0, 0, 1.0]
    cfg = write_config(tmp_path / "solve.json", payload)
    rep = tmp_path / "report.json"
    assert run(["solve", cfg, "--json", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert data["passed"] is True
    assert abs(data["u00"]) > 1e-5   # even perturbation shifts the average


def test_solve_counter_variant(tmp_path):
    payload = dict(SOLVE_PAYLOAD)
    payload["variant"] = "counter-propagating"
    payload["x_quotients"] = [400] + [5] * 39
    cfg = write_config(tmp_path / "solve.json", payload)
    rep = tmp_path / "report.json"
    assert run(["solve", cfg, "--json", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert data["variant"] == "counter-propagating"
    assert data["passed"] is True


def test_usage_error_exit_code():
    assert run(["no-such-command"]) == 2
