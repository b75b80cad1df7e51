"""End-to-end command-line runs via subprocess."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent


def whilelang(*args, cwd=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(ROOT / "src") + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(
        [sys.executable, "-m", "whilelang.cli", *args],
        capture_output=True, text=True, env=env, cwd=cwd or ROOT)


@pytest.fixture
def tmp_program(tmp_path):
    def write(text, name="prog.whl"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


@pytest.fixture
def store_file(tmp_path):
    def write(text):
        path = tmp_path / "store.txt"
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


class TestParse:
    def test_valid_program_prints_pretty_form(self, tmp_program):
        r = whilelang("parse", tmp_program("var  Nat   y := 4 ;  y := y+1"))
        assert r.returncode == 0
        assert r.stdout == "var Nat y := 4; y := y + 1\n"

    def test_runtime_keyword_rejected(self, tmp_program):
        r = whilelang("parse", tmp_program("beginscope"))
        assert r.returncode == 1
        assert "runtime-only keyword" in r.stderr

    def test_empty_file_rejected(self, tmp_program):
        r = whilelang("parse", tmp_program(""))
        assert r.returncode == 1


class TestCheck:
    def test_accepted(self, tmp_program):
        r = whilelang("check", tmp_program(
            "var Nat x := 1; while x <= 4 do x := x + 1"))
        assert r.returncode == 0
        assert r.stdout == "ok: Cmd\n"

    def test_rejected_names_the_subterm(self, tmp_program):
        r = whilelang("check", tmp_program(
            "var Nat y := 1;"
            " begin var Nat x := 2; var Bool y := true x := x + y end"))
        assert r.returncode == 2
        assert "x + y" in r.stderr
        assert "expected Nat, found Bool" in r.stderr

    def test_unparseable_is_exit_1(self, tmp_program):
        r = whilelang("check", tmp_program("0"))
        assert r.returncode == 1

    def test_emit_derivation(self, tmp_program, tmp_path):
        out = tmp_path / "derivation.txt"
        r = whilelang("check", tmp_program("var Nat x := 1"),
                      "--emit-derivation", "--out", str(out))
        assert r.returncode == 0
        assert out.read_text().startswith("T-Assign:")


class TestRun:
    def test_block_with_initial_store(self, tmp_program, store_file):
        r = whilelang("run", tmp_program("begin var Nat a := 4; b := 2 end"),
                      "--initial-store", store_file("({a=3, b=5})"))
        assert r.returncode == 0
        assert r.stdout == "void ({a=3, b=2})\n"

    def test_unbound_is_stuck_exit_3(self, tmp_program):
        r = whilelang("run", tmp_program("x := 1"))
        assert r.returncode == 3
        assert "unbound variable x" in r.stderr

    def test_infinite_loop_budget_exit_4(self, tmp_program):
        r = whilelang("run", tmp_program("var Nat x := 0; while true do x := 1"),
                      "--max-steps", "10")
        assert r.returncode == 4

    def test_checked_flag_stops_type_errors(self, tmp_program):
        r = whilelang("run", tmp_program("var Nat x := true"), "--checked")
        assert r.returncode == 2

    def test_unchecked_run_does_not_typecheck(self, tmp_program):
        r = whilelang("run", tmp_program("var Nat x := true"))
        assert r.returncode == 0
        assert r.stdout == "void ({x=true})\n"


class TestTrace:
    def test_golden_store_column(self, tmp_program, store_file):
        r = whilelang("trace", tmp_program("begin var Nat a := 4; b := 2 end"),
                      "--initial-store", store_file("({a=3, b=5})"))
        assert r.returncode == 0
        lines = [json.loads(line) for line in r.stdout.splitlines()]
        assert [x["store"] for x in lines[:-1]] == [
            "({a=3, b=5})",
            "({a=3, b=5}, {})",
            "({a=3, b=5}, {a=4})",
            "({a=3, b=2}, {a=4})",
            "({a=3, b=2})",
        ]
        assert lines[-1]["status"] == "terminated"


class TestGraphAndOutcomes:
    def test_parfree_program_gives_linear_dot_chain(self, tmp_program):
        r = whilelang("graph", tmp_program("var Nat x := 1; x := x + 1"))
        assert r.returncode == 0
        edges = [line for line in r.stdout.splitlines() if " -> " in line]
        nodes = [line for line in r.stdout.splitlines() if "[label=" in line
                 and "->" not in line]
        assert len(edges) == len(nodes) - 1

    def test_protected_outcomes(self, tmp_program):
        r = whilelang("outcomes", tmp_program(
            "var Nat x := 0; protect x := 2; x := 4 end par x := 6"))
        assert r.returncode == 0
        assert r.stdout == (
            "terminal: void ({x=4})\n"
            "terminal: void ({x=6})\n"
            "complete: true\n"
        )

    def test_unprotected_variant_is_strictly_larger(self, tmp_program, store_file):
        protected = whilelang(
            "outcomes",
            tmp_program("protect x := x + 1; x := x * 2 end par x := 10", "p.whl"),
            "--initial-store", store_file("({x=0})"))
        unprotected = whilelang(
            "outcomes",
            tmp_program("x := x + 1; x := x * 2 par x := 10", "u.whl"),
            "--initial-store", store_file("({x=0})"))
        want = {"terminal: void ({x=10})", "terminal: void ({x=22})"}
        got_protected = set(protected.stdout.splitlines()) - {"complete: true"}
        got_unprotected = set(unprotected.stdout.splitlines()) - {"complete: true"}
        assert got_protected == want
        assert got_protected < got_unprotected
        assert "terminal: void ({x=20})" in got_unprotected

    def test_truncated_graph_exits_4(self, tmp_program):
        r = whilelang("graph", tmp_program(
            "var Nat x := 0; while true do x := x + 1"),
            "--max-states", "5")
        assert r.returncode == 4

    def test_stuck_leaves_listed(self, tmp_program):
        r = whilelang("outcomes", tmp_program("x := 1"))
        assert r.returncode == 0
        assert "stuck: unbound variable x" in r.stdout


class TestDeterminism:
    def test_identical_flags_identical_bytes(self, tmp_program, tmp_path):
        prog = tmp_program(
            "var Nat x := 0; { protect x := x + 1; x := x * 2 end } par x := 10")
        runs = [whilelang("graph", prog).stdout for _ in range(2)]
        assert runs[0] == runs[1]
        traces = [whilelang("trace", prog, "--schedule", "random",
                            "--seed", "13").stdout for _ in range(2)]
        assert traces[0] == traces[1]
