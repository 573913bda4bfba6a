import json

import pytest

from picalc.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from picalc.fixtures import LOST_REDUCTION, EX1, EX2, EX4


@pytest.fixture
def write(tmp_path):
    def go(name, text):
        p = tmp_path / name
        p.write_text(text + "\n", encoding="utf-8")
        return str(p)
    return go


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse(capsys, write):
    code, out, _ = run(capsys, "parse", write("ex2.pi", EX2), "--mode", "im")
    assert code == EXIT_OK and out.strip() == "x(y).y!w.0 | x!u.u(v).0"
    code, _, err = run(capsys, "parse", write("bad.pi", "x(y.0"))
    assert code == EXIT_FAILED and "line 1, column" in err
    defs = write("defs.pi", "A(a) := 'a<a>.A(a)")
    code, out, _ = run(capsys, "parse", write("a.pi", "A(x)"), "--defs", defs)
    assert code == EXIT_OK and out.splitlines()[-1] == "A(x)" and out.startswith("A(a) :=")
    code, out, _ = run(capsys, "parse", write("a.ccs", "a!b.0 || tau.0"))
    assert code == EXIT_OK and "||" in out


def test_translate(capsys, write):
    code, out, _ = run(capsys, "translate", write("ex1.pi", EX1))
    assert code == EXIT_OK and out.strip() == "sum z. x?z.(y!w.0)[z/y]"
    code, out, _ = run(capsys, "translate", write("bb.pi", LOST_REDUCTION), "--encoder", "E")
    assert code == EXIT_OK and "sum" in out and "||" in out
    code, out, _ = run(capsys, "translate", write("nil.pi", "0"))
    assert out.strip() == "0"
    code, _, err = run(capsys, "translate", write("nu.pi", "nu x. 0"), "--encoder", "E")
    assert code == EXIT_USAGE and "fragment" in err


def test_lts(capsys, write, tmp_path):
    f = write("vu.pi", "'y<u>.0 | v(w).0")
    code, out, _ = run(capsys, "lts", f, "--semantics", "early-sym")
    assert code == EXIT_OK and "[y=v]tau" in out
    dot = tmp_path / "out.dot"
    code, _, _ = run(capsys, "lts", f, "--dot", str(dot), "--pool", "u,q")
    assert dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "lts", f, "--depth", "0")
    lines = out.splitlines()
    assert lines[0] == "y!u.0 | v(_b0).0" and lines[-1] == "  (unexpanded)"
    assert sum(1 for line in lines if not line.startswith(" ")) == 1
    code, out, _ = run(capsys, "lts", write("a.ccs", "a!b.0 || a?b.0"), "--semantics", "ccs")
    assert code == EXIT_OK and "--tau->" in out


def test_check(capsys, write, tmp_path):
    code, out, _ = run(capsys, "check", write("ex4.pi", EX4))
    assert code == EXIT_OK and out.startswith("PASS bisimilar (exact)")
    report = tmp_path / "r.json"
    bb = write("bb.pi", LOST_REDUCTION)
    code, out, _ = run(capsys, "check", bb, "--against", "translation-E", "--equiv", "reduction",
                       "--json", str(report))
    assert code == EXIT_FAILED and "witness length 2" in out
    doc = json.loads(report.read_text())
    assert set(doc) == {"verdict", "depth", "states", "witness"} and doc["verdict"] == "not-bisimilar"
    code, _, _ = run(capsys, "check", bb, "--against", "translation-E", "--equiv", "reduction",
                     "--expect-fail")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "check", bb, "--against", bb)
    assert code == EXIT_OK
    code, out, _ = run(capsys, "check", write("ex2.pi", EX2), "--equiv", "strong")
    assert code == EXIT_OK and "PASS" in out


def test_check_errors(capsys, write):
    code, _, err = run(capsys, "check", write("bad.pi", "x!"))
    assert code == EXIT_USAGE and err.startswith("picalc:")
    code, _, _ = run(capsys, "check", "/nonexistent/file.pi")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "check", write("a.ccs", "0"), "--against", "translation-T")
    assert code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["check"])
    assert exc.value.code == 2


def test_replay(capsys):
    code, out, _ = run(capsys, "replay", "--fixture", "ex6")
    assert code == EXIT_OK and "chain of 3" in out
    code, out, _ = run(capsys, "replay", "--fixture", "ccs-barbs", "--k", "10")
    assert code == EXIT_OK and "11 distinct weak barbs" in out
    code, out, _ = run(capsys, "replay", "--all", "--jobs", "2")
    assert code == EXIT_OK and out.splitlines()[-1] == "PASS 10 fixture(s)"
    code, _, _ = run(capsys, "replay", "--fixture", "bb98", "--expect-fail")
    assert code == EXIT_FAILED
    code, _, _ = run(capsys, "replay")
    assert code == EXIT_USAGE
