import csv
import io
import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from seqdiv import cli
from seqdiv.cli import EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, EXIT_TOLERANCE, InputError, main, parse_count, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_density_json(capsys):
    code, out, _ = run(capsys, "density", "3", "1", "1", "12", "--format", "json", "--series")
    rec = json.loads(out)
    assert code == EXIT_OK
    assert rec["density"] == "1/6" and rec["phi_d_density"] == "2/3" and rec["series"] == "1/6"
    assert (rec["table"], rec["row"], rec["extremal"]) == ("T2", "T2.3a", "intermediate")


@pytest.mark.parametrize("argv", [
    ["density", "1296", "1", "7", "30", "--format", "json"],
    ["extremal", "2", "1", "3", "8", "--format", "json", "--limit", "1e4"],
    ["fermat", "1.3", "--format", "json"],
    ["scan", "2", "1", "12", "--limit", "1e4", "--format", "json"],
    ["verify", "7", "1", "13", "56", "--limit", "1e5", "--format", "json"],
    ["selftest", "--grid", "a=2-4;b=1;d=1-8", "--format", "json"],
    ["tables", "--format", "json"],
])
def test_json_round_trip(capsys, argv):
    _, out, _ = run(capsys, *argv)
    line = out.rstrip("\n")
    assert json.dumps(json.loads(line), ensure_ascii=False) == line


def test_text_and_csv(capsys):
    _, out, _ = run(capsys, "density", "6", "1", "7", "15")
    assert "17/192" in out
    _, out, _ = run(capsys, "scan", "2", "1", "12", "--limit", "1e4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["c"] for r in rows] == ["1", "5", "7", "11"]
    assert rows[2]["expected"] == "1/2"
    _, out, _ = run(capsys, "tables", "--format", "csv")
    assert out.startswith("table,id,conditions,value,note")


def test_fermat_text(capsys):
    code, out, _ = run(capsys, "fermat", "1.2")
    assert code == EXIT_OK and out.strip().endswith("409, 457")


def test_verify_within_tolerance(capsys):
    code, out, _ = run(capsys, "verify", "9", "1", "17", "56", "--limit", "1e6")
    assert code == EXIT_OK and "ok" in out


def test_verify_outside_tolerance(capsys, monkeypatch):
    monkeypatch.setattr(cli, "tolerance", lambda expected, n: 0.0)
    code, _, _ = run(capsys, "verify", "9", "1", "17", "56", "--limit", "1e5")
    assert code == EXIT_TOLERANCE


@pytest.mark.parametrize("argv", [
    ["density", "3", "1", "2", "12"],
    ["density", "3", "3", "1", "12"],
    ["density", "0", "1", "1", "12"],
    ["density", "3", "1", "1", "0"],
    ["density", "x", "1", "1", "12"],
    ["verify", "3", "1", "1", "12", "--limit", "1.5"],
    ["verify", "3", "1", "1", "12", "--limit", "1"],
    ["verify", "3", "1", "1", "12", "--limit", "1e12"],
    ["scan", "3", "1", "12", "--threads", "0"],
    ["fermat", "1.1"],
    ["selftest", "--grid", "a=2-4;b=1"],
    ["nonsense"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert err


def test_internal_failure_exit_code(capsys, monkeypatch):
    from fractions import Fraction
    monkeypatch.setattr(cli, "density_series_params", lambda p: Fraction(-1))
    code, _, err = run(capsys, "density", "3", "1", "1", "12", "--series")
    assert code == EXIT_INTERNAL and "consistency" in err


def test_selftest_small_grid(capsys):
    code, out, _ = run(capsys, "selftest", "--grid", "a=2-6,16;b=1,3;d=1-24")
    assert code == EXIT_OK and out.startswith("0 mismatches")


def test_parse_count():
    assert parse_count("1e8") == 10**8
    assert parse_count("12345") == 12345
    with pytest.raises(Exception):
        parse_count("2.5")


def test_parse_grid():
    grid = parse_grid("a=2-4,16;b=1,3;d=5-7")
    assert grid == {"a": [2, 3, 4, 16], "b": [1, 3], "d": [5, 6, 7]}
    for bad in ("a=2-4;b=1", "a=4-2;b=1;d=1", "q=1;a=1;b=1;d=1", "a=x;b=1;d=1", "a=1;b=1;d=2000"):
        with pytest.raises(InputError):
            parse_grid(bad)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "seqdiv", "density", "5", "1", "9", "10", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["density"] == "1/12"


SCHEMA_PATH = pathlib.Path(__file__).resolve().parents[1] / "docs" / "schema.json"


@pytest.mark.parametrize("kind, argv", [
    ("density", ["density", "2", "1", "5", "14", "--format", "json", "--series"]),
    ("verify", ["verify", "2", "1", "5", "14", "--limit", "1e4", "--format", "json"]),
    ("scan", ["scan", "6", "1", "15", "--limit", "1e4", "--format", "json"]),
    ("fermat", ["fermat", "1.4", "--format", "json"]),
    ("extremal", ["extremal", "3", "1", "11", "12", "--limit", "1000", "--format", "json"]),
    ("selftest", ["selftest", "--grid", "a=2,3;b=1;d=1-12", "--format", "json"]),
    ("tables", ["tables", "--format", "json"]),
])
def test_output_matches_schema(capsys, kind, argv):
    schema = json.loads(SCHEMA_PATH.read_text())
    _, out, _ = run(capsys, *argv)
    jsonschema.validate(json.loads(out), {**schema, "$ref": f"#/$defs/{kind}"})
