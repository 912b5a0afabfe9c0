import json
import shutil
import subprocess
import sys

import pytest

from weilcalc.cli import main
from weilcalc.suite import bundled_script


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def fields_file(tmp_path):
    p = tmp_path / "f.weil"
    p.write_text("field X on 2 := -x2, x1\nfield Y on 2 := x2, 0\n", encoding="utf-8")
    return p


def test_check_passing_script(capsys, tmp_path):
    p = tmp_path / "t.weil"
    p.write_text(bundled_script("tangent.weil"), encoding="utf-8")
    code, out, _ = run(capsys, "check", str(p))
    assert code == 0
    assert out.strip().endswith("3 checks: 3 passed, 0 failed, 0 errors")


def test_check_failing_script(capsys, tmp_path):
    p = tmp_path / "bad.weil"
    p.write_text("obj Q = D^2\nmap bad : Q -> D := d1 + d2\n", encoding="utf-8")
    code, out, _ = run(capsys, "--format", "json", "check", str(p))
    assert code == 1
    rec = json.loads(out)["checks"][0]
    assert rec["details"]["error"] == "IllDefinedMap"


def test_input_errors_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "missing.weil"))
    assert code == 2 and "missing.weil" in err
    p = tmp_path / "syntax.weil"
    p.write_text("obj A = D^2\nmap f : D -> A :=\n", encoding="utf-8")
    code, _, err = run(capsys, "check", str(p))
    assert code == 2 and "syntax.weil:3:1" in err


def test_json_schema(capsys, tmp_path):
    p = tmp_path / "t.weil"
    p.write_text(bundled_script("flows.weil"), encoding="utf-8")
    code, out, _ = run(capsys, "check", str(p), "--format", "json")
    data = json.loads(out)
    assert list(data) == ["checks", "summary"]
    assert list(data["summary"]) == ["pass", "fail", "error"]
    for rec in data["checks"]:
        assert list(rec) == ["name", "kind", "status", "anchor", "details"]


def test_bracket_command(capsys, fields_file):
    code, out, _ = run(capsys, "--format", "json", "bracket", "--file", str(fields_file), "--x", "X", "--y", "Y")
    assert code == 0
    assert json.loads(out)["checks"][0]["details"]["bracket"] == "(x1, -x2)"


def test_bracket_unknown_field(capsys, fields_file):
    code, _, err = run(capsys, "bracket", "--file", str(fields_file), "--x", "X", "--y", "W")
    assert code == 2 and "'W'" in err


def test_suite_section_is_reproducible(capsys):
    args = ["--format", "json", "suite", "--section", "3", "--trials", "3", "--seed", "5"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["summary"]["fail"] == 0


def test_suite_rejects_bad_options(capsys):
    code, _, err = run(capsys, "suite", "--trials", "-1")
    assert code == 2
    with pytest.raises(SystemExit):
        main(["suite", "--section", "7"])


@pytest.mark.skipif(shutil.which("weilcalc") is None, reason="console script not installed")
def test_console_entry_point(fields_file):
    done = subprocess.run(["weilcalc", "bracket", "--file", str(fields_file), "--x", "Y", "--y", "X"],
                          capture_output=True, text=True)
    assert done.returncode == 0
    assert "(-x1, x2)" in done.stdout


def test_module_invocation(fields_file):
    done = subprocess.run([sys.executable, "-m", "weilcalc.cli", "bracket", "--file", str(fields_file),
                           "--x", "X", "--y", "X"], capture_output=True, text=True)
    assert done.returncode == 0 and "(0, 0)" in done.stdout
