import subprocess
import sys

import pytest

from hypsys.cli import run

from conftest import FIX

LIN = str(FIX / "linearity_sys.drv")


def test_check_ok(capsys):
    assert run(["check", LIN]) == 0
    assert "ok" in capsys.readouterr().out


def test_check_nd():
    assert run(["check", str(FIX / "lin_axiom.nd")]) == 0


def test_check_failure(tmp_path):
    f = tmp_path / "bad.drv"
    f.write_text("calculus: %s\np => q ; rule=ax\n" % (FIX / "godel_hyp.cal"))
    assert run(["check", str(f)]) == 1


def test_parse_error(tmp_path, capsys):
    f = tmp_path / "bad.drv"
    f.write_text("calculus: %s\np =>> q ; rule=ax\n" % (FIX / "godel_hyp.cal"))
    assert run(["check", str(f)]) == 2
    assert "parse error" in capsys.readouterr().err


def test_missing_file():
    assert run(["check", "/nonexistent.drv"]) == 2


def test_bad_arguments():
    assert run(["frobnicate"]) == 2


def test_translate_deriv_roundtrip(tmp_path):
    h, s = tmp_path / "h.drv", tmp_path / "s.drv"
    assert run(["translate-deriv", "--to", "hyp", LIN, "-o", str(h)]) == 0
    assert (tmp_path / "h.cal").exists()
    assert run(["check", str(h)]) == 0
    assert run(["translate-deriv", "--to", "sys", str(h), "-o", str(s)]) == 0
    assert run(["check", str(s)]) == 0


def test_translate_deriv_wrong_direction():
    assert run(["translate-deriv", "--to", "sys", LIN]) == 1


def test_translate_rule(tmp_path, capsys):
    assert run(["translate-rule", "--to", "hyp", "com"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("rule com")
    f = tmp_path / "lq.sys"
    assert run(["translate-rule", "--to", "sys", "lq", "-o", str(f)]) == 0
    assert run(["translate-rule", "--to", "hyp", str(f)]) == 0
    assert "rule lq" in capsys.readouterr().out


@pytest.mark.parametrize("form", ["structured", "disentangled", "no-same-path"])
def test_normalize(tmp_path, form):
    src = LIN if form != "structured" else str(FIX / "mixed_split_hyp.drv")
    out = tmp_path / "n.drv"
    assert run(["normalize", "--form", form, src, "-o", str(out)]) == 0
    assert run(["check", str(out)]) == 0


def test_nd_gen_and_check(tmp_path):
    f = tmp_path / "bc2.nd"
    assert run(["nd", "gen", "bc2", "-o", str(f)]) == 0
    assert run(["nd", "check", str(f)]) == 0


def test_nd_gen_unsupported():
    assert run(["nd", "gen", "lq"]) == 1


def test_classify(capsys):
    assert run(["classify", "(s v ~s)"]) == 0
    assert "in P3: yes" in capsys.readouterr().out


def test_prove(capsys):
    assert run(["prove", "=> ((p -> q) v (q -> p))", "--depth", "8", "--use", "com"]) == 0
    assert "rule=com" in capsys.readouterr().out
    assert run(["prove", "=> (p v ~p)", "--depth", "6"]) == 3


def test_render(capsys):
    assert run(["render", LIN, "--format", "latex"]) == 0
    assert "\\begin{prooftree}" in capsys.readouterr().out
    assert run(["render", str(FIX / "lem_axiom.nd")]) == 0


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "hypsys.cli", "check", LIN], capture_output=True, text=True)
    assert r.returncode == 0 and "ok" in r.stdout
