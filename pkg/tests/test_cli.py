from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from mndpair.cli import EXIT_CHECK, EXIT_INPUT, EXIT_OK, run
from mndpair.parallel import map_ordered


def call(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv: str) -> tuple[int, dict]:
    code, out, _ = call(*argv, "--json")
    return code, json.loads(out)


def _all_leaves(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from _all_leaves(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _all_leaves(v)
    else:
        yield obj


def test_pair_json_schema():
    code, rep = call_json("pair", "--n", "2", "--d", "1", "--g", "2")
    assert code == EXIT_OK
    assert rep["result"]["value"] == "1/12"
    assert rep["result"]["route"] == "mainab"
    assert rep["result"]["pi_exponent"] == "0"
    assert set(rep) == {"request", "result", "checks"}
    # every number travels as a string
    assert not any(isinstance(x, (int, float)) and not isinstance(x, bool) for x in _all_leaves(rep))


def test_pair_timing_is_opt_in():
    _, rep = call_json("pair", "--n", "2", "--d", "1", "--g", "2", "--timing")
    assert isinstance(rep["timing_ms"], str)


def test_pair_overfull_degree_does_not_crash():
    code, rep = call_json("pair", "--n", "2", "--d", "1", "--g", "2", "--a", "2=9")
    assert code == EXIT_OK
    assert rep["result"]["value"] == "0"
    assert any(c["name"] == "degree" and "exceeds" in c["detail"] for c in rep["checks"])


@pytest.mark.parametrize(
    "argv,value,route",
    [
        (("--n", "3", "--d", "1", "--g", "2", "--a", "2=1", "--f", "3=1"), "1/648", "t96b"),
        (("--n", "2", "--d", "1", "--g", "3", "--a", "2=1", "--b", "2:1", "--b", "2:4"), "1/2", "eq936"),
        (("--n", "2", "--d", "1", "--g", "2", "--a", "2=1", "--epsilon", "1/3"), "1/6", "mainab"),
        (("--n", "3", "--d", "1", "--g", "2", "--a", "2=1", "--route", "t96b"), "7/6480", "t96b"),
    ],
)
def test_pair_routes(argv, value, route):
    code, rep = call_json("pair", *argv)
    assert code == EXIT_OK
    assert (rep["result"]["value"], rep["result"]["route"]) == (value, route)


@pytest.mark.parametrize(
    "argv",
    [
        ("pair", "--n", "4", "--d", "2", "--g", "2"),
        ("pair", "--n", "2", "--d", "1", "--g", "2", "--a", "x"),
        ("pair", "--n", "2", "--d", "1", "--g", "2", "--f", "3=1"),
        ("pair", "--n", "2", "--d", "1", "--g", "2", "--epsilon", "0"),
        ("pair", "--n", "2", "--d", "1", "--g", "2", "--epsilon", "1/0"),
        ("verlinde", "--n", "2", "--d", "1", "--g", "2", "--k", "1"),
        ("oracle", "thaddeus", "--g", "2", "--j", "1"),
        ("oracle", "szenes", "--function", "nope"),
        ("oracle", "witten", "--n", "2", "--d", "1", "--g", "2", "--cutoff", "0"),
        ("selftest", "--suite", "nope"),
        ("frobnicate",),
    ],
)
def test_bad_input_exit_code(argv):
    code, _, _ = call(*argv)
    assert code == EXIT_INPUT


def test_verlinde_command():
    code, rep = call_json("verlinde", "--n", "2", "--d", "1", "--g", "2", "--k", "2")
    assert code == EXIT_OK
    assert rep["result"]["value"] == "6"
    assert rep["checks"][0]["status"] == "pass"
    assert rep["result"]["metadata"]["V"].startswith("6.0000")


def test_text_output():
    code, out, _ = call("verlinde", "--n", "2", "--d", "1", "--g", "2", "--k", "2")
    assert code == EXIT_OK
    assert "result.value" in out and "pass" in out


def test_oracle_commands():
    assert call_json("oracle", "svol", "--g", "4")[1]["result"]["value"] == "31/120960"
    assert call_json("oracle", "thaddeus", "--g", "2", "--j", "1", "--regularize")[1]["result"]["value"] == "1/2"
    code, rep = call_json("oracle", "szenes", "--function", "n2-y2-half")
    assert code == EXIT_OK and rep["result"]["value"] == "1/24"
    code, rep = call_json("oracle", "witten", "--n", "2", "--d", "1", "--g", "3", "--cutoff", "2000")
    assert code == EXIT_OK


def test_check_failure_exit_code():
    # a cutoff of 1 cannot converge to the tolerance
    code, rep = call_json("oracle", "witten", "--n", "2", "--d", "1", "--g", "2", "--cutoff", "1")
    assert code == EXIT_CHECK
    assert any(c["status"] == "fail" for c in rep["checks"])


def test_grid_csv():
    code, out, _ = call("grid", "--n", "2,3", "--d", "1,2", "--g", "2", "--a", "2=1")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4
    by = {(r["n"], r["d"]): r for r in rows}
    assert by[("2", "1")]["value"] == "1/2"
    assert by[("3", "2")]["value"] == "7/6480"
    assert by[("2", "2")]["status"].startswith("skipped")


def test_output_is_byte_identical():
    argv = ("pair", "--n", "3", "--d", "1", "--g", "2", "--a", "2=1", "--f", "3=1", "--json")
    assert call(*argv)[1] == call(*argv)[1]


def test_selftest_independent_of_thread_count(monkeypatch):
    monkeypatch.setenv("MNDPAIR_THREADS", "1")
    one = call("selftest", "--json", "--suite", "route-agreement", "--suite", "engine-oracle")
    monkeypatch.setenv("MNDPAIR_THREADS", "8")
    eight = call("selftest", "--json", "--suite", "route-agreement", "--suite", "engine-oracle")
    assert one == eight
    assert one[0] == EXIT_OK


def test_map_ordered_keeps_order(monkeypatch):
    monkeypatch.setenv("MNDPAIR_THREADS", "4")
    assert map_ordered(lambda x: x * x, range(50), min_items=1) == [x * x for x in range(50)]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mndpair", "pair", "--n", "2", "--d", "1", "--g", "2", "--json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["value"] == "1/12"
