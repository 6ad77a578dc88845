import json

import pytest

from rbnet import corpus
from rbnet.cli import main


@pytest.fixture
def robot_files(tmp_path):
    model = tmp_path / "robot.rbn"
    model.write_text(corpus.robot_source())
    scenario = tmp_path / "robot.rbs"
    scenario.write_text("domain {l1, l2, l3}\nquery s(l1), t(l2)\n")
    return str(model), str(scenario)


def test_check_valid(robot_files, capsys):
    model, _ = robot_files
    assert main(["check", model]) == 0
    assert "ok" in capsys.readouterr().out


def test_check_recursive_note(tmp_path, capsys):
    p = tmp_path / "sym.rbn"
    p.write_text(corpus.symmetric_source())
    assert main(["check", str(p)]) == 0
    assert "recursive" in capsys.readouterr().out


def test_check_invalid(tmp_path, capsys):
    p = tmp_path / "bad.rbn"
    p.write_text("relation r/1; r(x) = q(x);")
    assert main(["check", str(p)]) == 1
    assert "undeclared relation" in capsys.readouterr().err


def test_check_missing_file(capsys):
    assert main(["check", "/nonexistent/model.rbn"]) == 1


def test_infer_human_and_json(robot_files, capsys):
    model, scenario = robot_files
    assert main(["infer", model, scenario]) == 0
    out = capsys.readouterr().out
    assert "query s(l1): probability" in out
    assert "query t(l2): probability 0.5" in out

    assert main(["infer", model, scenario, "--json", "--oracle"]) == 0
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["query"] for r in records] == ["s(l1)", "t(l2)"]
    for r in records:
        assert r["delta"] <= 1e-9


def test_infer_deterministic_output(robot_files, capsys):
    model, scenario = robot_files
    main(["infer", model, scenario, "--json"])
    first = capsys.readouterr().out
    main(["infer", model, scenario, "--json"])
    second = capsys.readouterr().out

    def strip(text):
        return [{k: v for k, v in json.loads(l).items() if k != "wall_seconds"}
                for l in text.splitlines()]

    assert strip(first) == strip(second)


def test_infer_inconsistent_evidence(tmp_path, robot_files, capsys):
    model, _ = robot_files
    scenario = tmp_path / "bad.rbs"
    scenario.write_text("domain {l1, l2}\nevidence {b(l1,l1)}\nquery s(l1)\n")
    assert main(["infer", model, str(scenario)]) == 2


def test_infer_wellfoundedness_exit(tmp_path, capsys):
    model = tmp_path / "sym.rbn"
    model.write_text(corpus.symmetric_source())
    scenario = tmp_path / "sym.rbs"
    scenario.write_text("domain {d1, d2}\nrigid leq = {(d1,d1), (d2,d2)}\n"
                        "query r(d1,d2)\n")
    assert main(["infer", str(model), str(scenario)]) == 3
    assert "cyclic ground dependency" in capsys.readouterr().err


def test_infer_reports_wellfoundedness(tmp_path, capsys):
    model = tmp_path / "sym.rbn"
    model.write_text(corpus.symmetric_source())
    scenario = tmp_path / "sym.rbs"
    scenario.write_text("domain {d1, d2}\nrigid leq = {(d1,d1), (d1,d2), (d2,d2)}\n"
                        "evidence {r(d1,d2)}\nquery r(d2,d1)\n")
    assert main(["infer", str(model), str(scenario)]) == 0
    out = capsys.readouterr().out
    assert "well-founded: yes" in out
    assert "probability 1" in out


def test_oracle_command_and_budget(robot_files, tmp_path, capsys):
    model, scenario = robot_files
    assert main(["oracle", model, scenario]) == 0
    out = capsys.readouterr().out
    assert "query s(l1)" in out
    assert main(["oracle", model, scenario, "--budget-bits", "3"]) == 4


def test_elim_order_flag(robot_files, capsys):
    model, scenario = robot_files
    assert main(["infer", model, scenario, "--elim-order", "lex", "--json"]) == 0
    lex = json.loads(capsys.readouterr().out.splitlines()[0])["probability"]
    assert main(["infer", model, scenario, "--json"]) == 0
    minfill = json.loads(capsys.readouterr().out.splitlines()[0])["probability"]
    assert lex == pytest.approx(minfill, abs=1e-12)


def test_deps_output(robot_files, capsys):
    model, _ = robot_files
    assert main(["deps", model, "s", "b"]) == 0
    out = capsys.readouterr().out
    assert "pa_{s,b}" in out and "normal form" in out
    assert main(["deps", model, "b", "s"]) == 0
    assert "false" in capsys.readouterr().out
    assert main(["deps", model, "s", "nope"]) == 1


def test_translate_fol_output(capsys):
    assert main(["translate-fol", "exists y b(x,y)"]) == 0
    assert capsys.readouterr().out.strip() == "max{ b(x,y) | y; true }"
    assert main(["translate-fol", "!t(x)"]) == 0
    assert capsys.readouterr().out.strip() == "cc(t(x), 0, 1)"
    assert main(["translate-fol", "x = y"]) == 0
    assert capsys.readouterr().out.strip() == "max{ 1 | ; x = y }"
    assert main(["translate-fol", "b(x,"]) == 1
