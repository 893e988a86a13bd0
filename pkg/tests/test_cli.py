"""Command-line contract: exit codes, output shapes, report determinism."""

import json
import subprocess
import sys

import pytest

PY = [sys.executable, "-m", "substkit.cli"]


def run_cli(*args, **kw):
    return subprocess.run(PY + list(args), capture_output=True, text=True, **kw)


def test_run_identity_table(tmp_path):
    prog = tmp_path / "prog.cbv"
    prog.write_text("val x\n")
    out = run_cli("run", str(prog), "--context", "x: b", "--expect", "C b",
                  "--monad", "identity")
    assert out.returncode == 0
    assert "('b0',) -> 'b0'" in out.stdout
    assert "('b1',) -> 'b1'" in out.stdout


def test_run_parse_error_exit_1(tmp_path):
    prog = tmp_path / "bad.cbv"
    prog.write_text("let = in\n")
    out = run_cli("run", str(prog))
    assert out.returncode == 1
    assert "error" in out.stderr


def test_run_unsupported_capability_exit_2(tmp_path):
    prog = tmp_path / "loop.cbv"
    prog.write_text("for i = val 0 do val (<Done: Nat, Cont: Nat>.Cont i)\n")
    out = run_cli("run", str(prog), "--fragment", "while,naturals",
                  "--monad", "identity", "--nat-bound", "3")
    assert out.returncode == 2


def test_run_divergence_marker(tmp_path):
    prog = tmp_path / "loop.cbv"
    prog.write_text("for i = val 0 do val (<Done: Nat, Cont: Nat>.Cont i)\n")
    out = run_cli("run", str(prog), "--fragment", "while,naturals",
                  "--monad", "option", "--nat-bound", "3")
    assert out.returncode == 0
    assert "('none',)" in out.stdout


def test_fragments_lists_128():
    out = run_cli("fragments")
    assert out.returncode == 0
    assert out.stdout.splitlines()[0].startswith("128 ")
    assert out.stdout.count("- base") == 128
    assert "strong monad over a Cartesian category" in out.stdout
    assert "Done" in out.stdout  # the while row shows the Done/Cont need


def test_subst_identity_env_prints_term_and_passes(tmp_path):
    term = tmp_path / "t.cbv"
    term.write_text("fn z: b . (val f) ((val g) (val z))\n")
    sub = tmp_path / "s.subst"
    sub.write_text("target f: b -> b, g: b -> b\nf = f\ng = g\n")
    out = run_cli("subst", str(term), str(sub), "--fragment", "functions",
                  "--context", "f: b -> b, g: b -> b", "--expect", "b -> b",
                  "--monad", "option")
    assert out.returncode == 0
    assert "substitution lemma: PASS" in out.stdout
    assert "fn x2: b . (val x0) ((val x1) (val x2))" in out.stdout


def test_subst_merges_duplicate_assignment(tmp_path):
    term = tmp_path / "t.cbv"
    term.write_text("fn z: b . (val f) ((val g) (val z))\n")
    sub = tmp_path / "s.subst"
    sub.write_text("target h: b -> b\nf = h\ng = h\n")
    out = run_cli("subst", str(term), str(sub), "--fragment", "functions",
                  "--context", "f: b -> b, g: b -> b", "--expect", "b -> b",
                  "--monad", "option")
    assert out.returncode == 0
    assert "fn x1: b . (val x0) ((val x0) (val x1))" in out.stdout


def test_check_exit_0_and_report_determinism(tmp_path):
    args = ("check", "term-laws", "--fragment", "sequential,functions",
            "--count", "25", "--seed", "7")
    a = run_cli(*args, "--report", str(tmp_path / "a.jsonl"))
    b = run_cli(*args, "--report", str(tmp_path / "b.jsonl"))
    assert a.returncode == 0 and b.returncode == 0
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    record = json.loads((tmp_path / "a.jsonl").read_text().splitlines()[0])
    assert record["status"] == "pass"


def test_check_skew_reports_empty_witness_line():
    out = run_cli("check", "skew", "--structures", "2", "--seed", "3")
    assert out.returncode == 0
    assert "not invertible" in out.stdout
    assert "empty at second-class sorts" in out.stdout


def test_check_monad_laws_option():
    out = run_cli("check", "monad-laws", "--monad", "option")
    assert out.returncode == 0


def test_run_factorial_program(tmp_path):
    prog = tmp_path / "fact.cbv"
    prog.write_text("""
letrec fact[m: Nat]: Nat =
  case (unroll (val m)) of {
    0 z -> val 1
  | 1+ p -> let r = (val fact) (val {0 = p}) in
            fold[Nat] (val r) acc .
              case (val acc) of {
                0 z2 -> val 0
              | 1+ prev -> fold[Nat] (val m) acc2 .
                  case (val acc2) of {
                    0 z3 -> val prev
                  | 1+ q -> roll (<0: {}, 1+: Nat>.1+ (val q)) } } }
in (val fact) (val {0 = 3})
""")
    out = run_cli("run", str(prog), "--fragment", "full", "--monad", "option",
                  "--nat-bound", "25", "--type-depth", "4")
    assert out.returncode == 0
    assert "('some', 6)" in out.stdout
