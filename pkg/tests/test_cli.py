from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from polyclosure.cli import main
from polyclosure.clones import AND, NOT, OR
from polyclosure.core import Operation
from polyclosure.formats import render_truth_tables


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue().splitlines()


@pytest.fixture
def instance(tmp_path):
    def make(*rows, domain=None):
        path = tmp_path / f"inst{len(list(tmp_path.iterdir()))}.txt"
        head = f"domain {domain}\n" if domain else ""
        path.write_text(head + "\n".join(rows) + "\n")
        return str(path)

    return make


@pytest.fixture
def ops_file(tmp_path):
    def make(ops):
        path = tmp_path / "ops.tt"
        path.write_text(render_truth_tables(ops))
        return str(path)

    return make


def test_decide_exit_codes(instance):
    worked = instance("1101", "0110", "1010")
    assert run(["decide", "--clone", "E2 dual", "--vector", "1110", worked]) == (0, ["yes"])
    assert run(["decide", "--clone", "D2", "--vector", "000", instance("110", "011", "101")]) == (1, ["no"])
    assert run(["decide", "--clone", "L0", "--vector", "101", instance("110", "011")]) == (0, ["yes"])


def test_decide_errors_exit_two(instance, capsys):
    path = instance("110", "011")
    assert run(["decide", "--clone", "L0", "--vector", "10", path])[0] == 2
    assert "length" in capsys.readouterr().err
    assert run(["decide", "--clone", "Q9", "--vector", "101", path])[0] == 2
    assert run(["decide", "--clone", "L0", "--vector", "101", path + ".missing"])[0] == 2
    assert run(["decide", "--clone", "E2 +neg", "--vector", "101", path])[0] == 2


def test_enum_examples(instance):
    worked = instance("1101", "0110", "1010")
    code, lines = run(["enum", "--clone", "E2 dual", worked])
    assert code == 0
    assert set(lines) == {"1101", "1111", "0110", "1010", "1110"} and len(lines) == 5
    assert run(["enum", "--clone", "L0", "--count-only", instance("110", "011")]) == (0, ["4"])
    assert run(["enum", "--clone", "I2", worked])[1] == ["0110", "1010", "1101"]


def test_enum_generic_and_sorted(instance):
    path = instance("110", "011", "101")
    fast = run(["enum", "--clone", "D2", "--sorted", path])[1]
    generic = run(["enum", "--clone", "D2", "--generic", path])[1]
    assert fast == generic == sorted(fast)


def test_enum_output_is_closed(instance):
    path = instance("10110", "01101", "11000")
    lines = run(["enum", "--clone", "S12", path])[1]
    for line in lines:
        assert run(["decide", "--clone", "S12", "--vector", line, path])[0] == 0


def test_enum_with_explicit_ops(instance, ops_file, capsys):
    capped = Operation.from_function("cappedSum", 2, 3, lambda x, y: min(x + y, 2))
    code, lines = run(["enum", "--ops", ops_file([capped]), instance("01", "10", domain=3)])
    assert code == 0 and len(lines) == 8
    assert "memory" in capsys.readouterr().err


def test_enum_rejects_bad_instance(instance):
    assert run(["enum", "--clone", "E2", instance("10", "1")])[0] == 2


def test_saturate_examples(instance, ops_file, capsys):
    capped = Operation.from_function("cappedSum", 2, 3, lambda x, y: min(x + y, 2))
    code, lines = run(["saturate", "--ops", ops_file([capped]), instance("01", "10", domain=3)])
    assert code == 0 and len(lines) == 8
    assert "warning" in capsys.readouterr().err
    code, lines = run(["saturate", "--ops", ops_file([OR, AND, NOT]), instance("101", "110")])
    assert len(lines) == 8


def test_saturate_empty_op_file(instance, tmp_path):
    empty = tmp_path / "none.tt"
    empty.write_text("# no operations\n")
    assert run(["saturate", "--ops", str(empty), instance("10", "01")]) == (0, ["10", "01"])


def test_saturate_budget_overflow(instance, ops_file, capsys):
    code, lines = run(["saturate", "--ops", ops_file([OR, NOT]), "--budget", "5", instance("1000", "0100")])
    assert code == 2
    assert len(lines) == 5
    assert "budget" in capsys.readouterr().err


def test_bench_reports_ratio():
    code, lines = run(["bench", "--clone", "E2", "--n", "32", "--limit", "300"])
    assert code == 0
    record = json.loads(lines[-1])
    assert record["counter"] == "updates"
    assert record["bound"] == 2 * 16 * 32 + 8 * 32
    assert record["max"] <= record["bound"]
    assert record["emissions"] == 300


def test_bench_is_deterministic():
    a = json.loads(run(["bench", "--clone", "D2", "--n", "24", "--seed", "4", "--limit", "200"])[1][-1])
    b = json.loads(run(["bench", "--clone", "D2", "--n", "24", "--seed", "4", "--limit", "200"])[1][-1])
    for key in ("max", "mean", "histogram", "maxima"):
        assert a[key] == b[key]


def test_convert(tmp_path, capsys):
    dnf = tmp_path / "phi.dnf"
    dnf.write_text("1 2\n")
    assert run(["convert", "--vars", "3", str(dnf)]) == (0, ["110", "111"])
    dnf.write_text("1 -2\n")
    assert run(["convert", str(dnf)])[0] == 2
    assert "monotone" in capsys.readouterr().err


def test_gen_random_deterministic():
    first = run(["gen", "random", "--n", "5", "--m", "3", "--seed", "7"])
    assert first == run(["gen", "random", "--n", "5", "--m", "3", "--seed", "7"])
    assert run(["gen", "random", "--n", "4", "--m", "3", "--density", "1.0"])[1] == ["1111"]


def test_gen_hittingset(tmp_path):
    h = tmp_path / "h.txt"
    h.write_text("1 2\n2 3\n")
    code, lines = run(["gen", "hittingset", "--hypergraph", str(h)])
    assert code == 0
    assert [x for x in lines if not x.startswith("#")] == ["001", "100"]


def test_module_entry_point(instance):
    path = instance("110", "011")
    proc = subprocess.run(
        [sys.executable, "-m", "polyclosure", "decide", "--clone", "L0", "--vector", "111", path],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1 and proc.stdout.strip() == "no"
