import subprocess
import sys

import pytest

from conftest import CORPUS, MANIFEST
from spartan.cli import main

T1 = CORPUS / "tier1"


def spartan(*args, timeout=120):
    return subprocess.run([sys.executable, "-m", "spartan", *map(str, args)],
                          capture_output=True, text=True, timeout=timeout)


def test_check_reports_declaration_count():
    r = spartan("check", T1 / "arithmetic.mltt")
    assert r.returncode == 0
    assert r.stdout.startswith("OK ") and "declarations" in r.stdout


def test_eval_prints_normal_form():
    r = spartan("eval", T1 / "search.mltt", "minimal-root-of-f")
    assert (r.returncode, r.stdout.strip()) == (0, "2")


def test_type_prints_type():
    r = spartan("type", T1 / "arithmetic.mltt", "twelve")
    assert (r.returncode, r.stdout.strip()) == (0, "Nat")


def test_type_error_exits_one_with_location():
    r = spartan("check", CORPUS / "neg" / "one-is-zero.mltt")
    assert r.returncode == 1
    assert "ERROR TypeMismatch at" in r.stdout and "one-is-zero" in r.stdout
    assert "expected" in r.stdout


def test_parse_error_exits_one():
    r = spartan("check", CORPUS / "neg" / "parse-error.mltt")
    assert r.returncode == 1 and "ParseError" in r.stdout


def test_bad_eval_term_is_a_type_error():
    r = spartan("eval", T1 / "arithmetic.mltt", "no-such-name")
    assert r.returncode == 1 and "UnboundName" in r.stdout


@pytest.mark.parametrize("args", [
    [],
    ["frobnicate"],
    ["check"],
    ["check", "/nonexistent/file.mltt"],
    ["check", "--max-depth", "0", str(T1 / "logic.mltt")],
    ["corpus", "/nonexistent/manifest"],
    ["corpus", "--jobs", "0", str(MANIFEST)],
])
def test_usage_errors_exit_two(args):
    assert spartan(*args).returncode == 2


def test_safe_flag(tmp_path):
    f = tmp_path / "ax.mltt"
    f.write_text("assume ax : Empty\n")
    assert spartan("check", f).returncode == 0
    r = spartan("check", "--safe", f)
    assert r.returncode == 1 and "UnsafeAssume" in r.stdout


def test_prelude(tmp_path):
    f = tmp_path / "uses.mltt"
    f.write_text("def thirteen : Nat := succ twelve\n")
    assert spartan("check", f).returncode == 1
    r = spartan("eval", "--prelude", T1 / "arithmetic.mltt", f, "thirteen")
    assert (r.returncode, r.stdout.strip()) == (0, "13")


def test_max_depth():
    assert spartan("eval", "--max-depth", "3", T1 / "search.mltt", "minimal-root-of-f").returncode == 1
    r = spartan("check", "--max-depth", "3", T1 / "search.mltt")
    assert "DepthExceeded" in r.stdout


def test_corpus_tier_selection_and_jobs():
    r = spartan("corpus", "--tier", "NEG", "--jobs", "2", MANIFEST)
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert all(" tier NEG " in line for line in lines[:-1])
    # report order follows the manifest even when run in parallel
    assert lines[0].split()[3].endswith("one-is-zero.mltt")
    assert lines[-1] == f"{len(lines) - 1}/{len(lines) - 1} entries passed"


def test_corpus_failure_exits_one(tmp_path):
    (tmp_path / "ok.mltt").write_text("def x : Nat := 1\n")
    (tmp_path / "m").write_text("ok.mltt\tNEG\treject:TypeMismatch\t-\t-\tsafe\n")
    r = spartan("corpus", tmp_path / "m")
    assert r.returncode == 1 and r.stdout.startswith("FAIL")


def test_main_in_process(capsys):
    assert main(["eval", str(T1 / "arithmetic.mltt"), "twelve"]) == 0
    assert capsys.readouterr().out.strip() == "12"
