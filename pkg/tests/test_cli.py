import io
import json

import pytest

from sawtm.census import Method
from sawtm.cli import output_record, run_cli, series_from_record
from sawtm.core import CountSeries, LatticeMode


def run(*argv):
    out = io.StringIO()
    code = run_cli(list(argv), out=out)
    return code, out.getvalue()


def test_census_json_oracle():
    code, text = run("census", "--mode", "sap", "--n", "8", "--method", "oracle", "--format", "json")
    assert code == 0
    rec = json.loads(text)
    assert rec["counts"] == {"4": "1", "6": "2", "8": "7"}
    assert rec["mode"] == "sap" and rec["method"] == "oracle"


def test_verify_pass():
    code, text = run("verify", "--mode", "sap", "--n", "12", "--k", "3")
    assert code == 0
    assert text.strip().endswith("PASS")
    assert "FAIL" not in text


def test_k_too_large_is_usage_error(capsys):
    code, _ = run("census", "--mode", "sap", "--n", "7", "--method", "skip", "--k", "9")
    assert code == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_flag(capsys):
    code, text = run("census", "--n", "8", "--frobnicate")
    assert code == 2 and text == ""
    assert "usage" in capsys.readouterr().err


def test_csv_schema():
    code, text = run("census", "--mode", "saw", "--n", "4", "--format", "csv")
    assert code == 0
    assert text.splitlines() == ["length,count", "0,1", "1,4", "2,12", "3,36", "4,100"]


def test_rect_command():
    code, text = run("rect", "--mode", "sap", "--w", "2", "--h", "2", "--n", "8", "--method", "skip", "--k", "2")
    assert code == 0
    assert json.loads(text)["counts"] == {"8": "5"}
    code, text = run("rect", "--mode", "saw", "--w", "3", "--h", "0", "--n", "4", "--format", "csv")
    assert text.splitlines() == ["length,count", "3,1"]


def test_bench_header():
    code, text = run("bench", "--mode", "sap", "--n", "10", "--k", "2")
    lines = text.splitlines()
    assert code == 0
    assert lines[0] == "method,mode,n,k,seconds,peak_states"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["oracle", "tm", "skip"]


def test_resource_limits(capsys):
    code, _ = run("census", "--n", "20", "--memory-limit", "5000")
    assert code == 3
    code, _ = run("census", "--n", "28", "--method", "oracle")
    assert code == 3


def test_identical_output_except_timing():
    a = json.loads(run("census", "--n", "12", "--method", "skip", "--k", "3")[1])
    b = json.loads(run("census", "--n", "12", "--method", "skip", "--k", "3")[1])
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_json_round_trip_big():
    series = CountSeries(40, {40: 7 ** 60, 38: 1})
    rec = output_record(LatticeMode.SAP, Method.SKIP, 40, 5, 8, series, 1.5, 10)
    back = json.loads(json.dumps(rec))
    assert back == rec
    assert series_from_record(back) == series
