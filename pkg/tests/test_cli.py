import json
import subprocess
import sys

import pytest

from nq1 import CORPUS
from nq1.cli import COMMANDS, main
from witness import verify_report

EXPECTED = {
    "su2": {"check-q": 0, "build-q": 0, "analyze-distribution": 1, "reduce": 0, "check-action": 2},
    "completion": {"check-q": 0, "extract-algebroid": 0, "check-action": 0, "reduce": 0, "build-q": 2},
    "completion_distributions": {"analyze-distribution": 1, "reduce": 1},
    "unclosed": {"check-action": 1, "reduce": 1},
    "translation": {"check-action": 0, "reduce": 0},
    "imf_su2_not_ideal": {"check-imfoliation": 1},
    "imf_completion": {"check-imfoliation": 0, "reduce": 2},
    "imf_tr2": {"check-imfoliation": 0},
}

CASES = [(f, c, code) for f, cmds in EXPECTED.items() for c, code in cmds.items()]


def run_json(name, command, tmp_path, *extra):
    out = tmp_path / f"{name}-{command}.json"
    code = main([command, str(CORPUS / f"{name}.nq1"), "--json", str(out), *extra])
    return code, out.read_bytes() if out.exists() else b""


@pytest.mark.parametrize("name,command,code", CASES)
def test_exit_codes(name, command, code, tmp_path, capsys):
    got, _ = run_json(name, command, tmp_path)
    assert got == code, capsys.readouterr()


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.nq1"
    bad.write_text("manifold { base = 1; rank = 1 \n")
    assert main(["check-q", str(bad)]) == 2
    assert "line" in capsys.readouterr().err
    assert main(["check-q", str(tmp_path / "missing.nq1")]) == 2
    empty = tmp_path / "empty.nq1"
    empty.write_text("")
    assert main(["check-q", str(empty)]) == 2
    assert main(["no-such-command", str(empty)]) == 2
    assert main(["reduce", str(CORPUS / "su2.nq1"), "--samples", "-1"]) == 2


def test_json_shape(tmp_path):
    _, data = run_json("su2", "reduce", tmp_path)
    report = json.loads(data)
    assert report["schema"] == 1 and report["command"] == "reduce"
    assert report["quotient"]["invariants"]["basis"] == ["1", "xi2^xi3"]
    assert data.decode() == json.dumps(report, sort_keys=True, indent=2) + "\n"


def test_build_q_text(capsys):
    assert main(["build-q", str(CORPUS / "su2.nq1")]) == 0
    out = capsys.readouterr().out
    assert "-xi2^xi3*d/dxi1 + xi1^xi3*d/dxi2 - xi1^xi2*d/dxi3" in out


@pytest.mark.parametrize("name", sorted(p.stem for p in CORPUS.glob("*.nq1")))
def test_runs_are_byte_identical(name, tmp_path):
    for command in COMMANDS:
        code1, first = run_json(name, command, tmp_path)
        code2, second = run_json(name, command, tmp_path)
        assert (code1, first) == (code2, second)


@pytest.mark.parametrize("name,command", [("unclosed", "check-action"), ("completion_distributions", "analyze-distribution"),
                                          ("completion_distributions", "reduce"), ("imf_su2_not_ideal", "check-imfoliation")])
def test_witnesses_reparse_and_reverify(name, command, tmp_path):
    _, data = run_json(name, command, tmp_path)
    assert verify_report((CORPUS / f"{name}.nq1").read_text(), json.loads(data)) >= 1


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "nq1.cli", "check-q", str(CORPUS / "su2.nq1"), "--json", "-"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["status"] == "pass"
