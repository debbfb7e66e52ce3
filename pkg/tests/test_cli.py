import csv
import io
import json
import subprocess
import sys

import pytest

from idealcount.cli import build_parser, config_from_args, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_modulus_4(capsys):
    code, out, err = run(capsys, "verify", "--modulus", "4", "--xmax", "100000", "--theta", "1/4")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["passed"] is True
    rep = doc["report"]
    assert rep["claimed_constant"] == 2.08 and rep["theta"] == "1/4" and rep["d"] == -1
    assert "worst ratio" in err and "PASS" in err


def test_verify_modulus_3_cube_root_csv(capsys):
    code, out, _ = run(capsys, "verify", "--modulus", "3", "--xmax", "100000", "--theta", "1/3",
                       "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["X", "S", "main", "error", "ratio"]
    assert rows[-1][0] == "summary" and float(rows[-1][3]) == 1.94
    float(rows[1][2])  # plain floats, not numpy reprs


def test_verify_small_d(capsys):
    code, out, _ = run(capsys, "verify", "--d", "-7", "--xmax", "100000", "--xmin", "68", "--theta", "1/3")
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["claimed_constant"] == 3.4 and rep["x_min"] == 68 and rep["constant"] == "-1/2"


def test_verify_general_d_uses_main_constant(capsys):
    code, out, _ = run(capsys, "verify", "--d", "-23", "--xmax", "20000", "--mmax", "10000")
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["x_min"] >= 23 and rep["claimed_constant"] > 0


def test_verify_fails_with_too_small_constant(capsys):
    code, out, err = run(capsys, "verify", "--modulus", "4", "--xmax", "10000", "--constant", "0.5")
    assert code == 1
    assert json.loads(out)["passed"] is False and "FAIL" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--modulus", "5"],
    ["verify", "--d", "2"],
    ["verify", "--d", "-4"],
    ["verify", "--d", "-1", "--modulus", "4"],
    ["verify", "--xmax", "0"],
    ["verify", "--xmin", "100", "--xmax", "10"],
    ["verify", "--modulus", "4", "--theta", "1/5"],
    ["verify", "--d", "-7", "--theta", "1/4"],
    ["verify", "--d", "-7", "--xmin", "10"],
    ["verify", "--blocksize", "100"],
    ["verify", "--workers", "0"],
    ["table-c0", "--d", "-17", "--mmax", "50"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


@pytest.mark.parametrize("argv", [["nonsense"], ["verify", "--theta", "2"], ["verify", "--format", "xml"],
                                  ["check-main", "--regime", "tiny"]])
def test_argparse_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("IDEALCOUNT_XMAX", "12345")
    monkeypatch.setenv("IDEALCOUNT_THETA", "1/3")
    monkeypatch.setenv("IDEALCOUNT_FORMAT", "csv")
    cfg = config_from_args(build_parser().parse_args(["verify", "--modulus", "4"]))
    assert cfg.x_max == 12345 and str(cfg.theta) == "1/3" and cfg.fmt == "csv"
    cfg = config_from_args(build_parser().parse_args(["verify", "--modulus", "4", "--xmax", "99"]))
    assert cfg.x_max == 99  # flags win over the environment


def test_table_single_row(capsys, tmp_path):
    out_file = tmp_path / "t.csv"
    code, out, err = run(capsys, "table-c0", "--d", "-11", "--format", "csv", "--out", str(out_file))
    assert code == 0 and out == ""
    rows = list(csv.reader(out_file.open()))
    assert rows[0] == ["d", "delta", "omega", "c34", "c54", "c0", "C0", "table_value", "verdict"]
    assert rows[1][0] == "-11" and rows[1][-1] == "pass" and float(rows[1][6]) <= 2.48


def test_table_small_mmax_is_not_a_fail(capsys):
    code, out, _ = run(capsys, "table-c0", "--d", "-11", "--mmax", "1000")
    row = json.loads(out)["rows"][0]
    assert row["verdict"] in ("pass", "inconclusive")
    assert code == (0 if row["verdict"] == "pass" else 1)


def test_table_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "table-c0", "--d", "-1", "--mmax", "10000")
    _, one, _ = run(capsys, "table-c0", "--mmax", "10000", "--workers", "2", "--format", "csv")
    _, two, _ = run(capsys, "table-c0", "--mmax", "10000", "--format", "csv")
    assert one == two
    assert json.loads(serial)["rows"][0]["d"] == -1


def test_outputs_bit_identical_across_workers_and_blocks(capsys):
    base = ["verify", "--modulus", "3", "--xmax", "200000"]
    _, a, _ = run(capsys, *base)
    _, b, _ = run(capsys, *base, "--workers", "2", "--blocksize", "65536")
    _, c, _ = run(capsys, *base, "--blocksize", "1024")
    assert a == b == c


def test_check_bessel(capsys):
    code, out, _ = run(capsys, "check-bessel")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and len(doc["rows"]) == 52


def test_check_tkernel(capsys):
    code, out, _ = run(capsys, "check-tkernel", "--regime", "standard")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 1 and rows[0]["measured"] > 0


def test_check_voronoi(capsys):
    code, out, _ = run(capsys, "check-voronoi", "--d", "-3", "--mmax", "100000")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 5
    code, out, _ = run(capsys, "check-voronoi", "--d", "-3", "--mmax", "100000", "--xmax", "77")
    assert code == 0 and len(json.loads(out)["rows"]) == 1


def test_check_main(capsys):
    code, out, err = run(capsys, "check-main", "--d", "-1", "--xmax", "100000", "--regime", "both")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 2  # 130^2 * 4 = 67600 lies in range
    code, out, err = run(capsys, "check-main", "--d", "-2", "--xmax", "100000", "--regime", "large")
    assert code == 0 and "skipped" in err


def test_check_firstapprox(capsys):
    code, out, _ = run(capsys, "check-firstapprox", "--d", "-1", "--regime", "both")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and len(doc["rows"]) == 9 + 4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "idealcount", "verify", "--modulus", "4", "--xmax", "1000",
                           "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("X,S,main,error,ratio")
