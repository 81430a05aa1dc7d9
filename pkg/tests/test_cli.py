import json

import pytest

from rankineis.cli import (EXIT_INPUT, EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE, main,
                           read_config_file)


def call(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_cg(capsys):
    code, rep = call(capsys, "cg", "--k", "2", "--kprime", "2", "--j", "1")
    assert code == EXIT_OK
    assert rep["results"]["trilinear"] == "4"
    assert all(im["oracle_agrees"] for im in rep["results"]["images"])


def test_report_is_deterministic(capsys):
    main(["eis", "--t", "2", "--s", "1", "--N", "5", "--p", "7", "--prec-q", "20"])
    a = capsys.readouterr().out
    main(["eis", "--t", "2", "--s", "1", "--N", "5", "--p", "7", "--prec-q", "20"])
    b = capsys.readouterr().out
    assert a == b
    assert json.loads(a)["timings"] == {}


def test_timings_opt_in(capsys):
    code, rep = call(capsys, "cg", "--k", "1", "--kprime", "1", "--j", "0", "--timings")
    assert code == EXIT_OK and "cg" in rep["timings"]


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nk = 3\nkprime = 1\nj = 1\n")
    assert read_config_file(str(cfg))["k"] == "3"
    code, rep = call(capsys, "cg", "--config", str(cfg), "--j", "0")
    s = rep["config"]["settings"]
    assert (s["k"], s["kprime"], s["j"]) == (3, 1, 0)


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["cg", "--k", "1", "--kprime", "0", "--j", "0", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["results"]["k"] == 1


def test_precondition_exit(capsys):
    code, rep = call(capsys, "regulator", "--mode", "two-route", "--fixture-f", "14k8",
                     "--fixture-g", "14a", "--j", "0", "--p", "13")
    assert code == EXIT_PRECONDITION
    assert rep["error"]["type"] == "UntestableConfiguration"


def test_input_exit(capsys):
    code, rep = call(capsys, "lvalue", "--f", "no_such_form", "--g", "delta", "--s", "21")
    assert code == EXIT_INPUT


def test_usage_exit(tmp_path, capsys):
    with pytest.raises(SystemExit) as e:
        main(["cg", "--k", "x"])
    assert e.value.code == EXIT_USAGE
    assert main(["cg", "--config", str(tmp_path / "missing.cfg")]) == EXIT_USAGE


def test_regulator_constants(capsys):
    code, rep = call(capsys, "regulator", "--mode", "constants", "--k", "2", "--kprime", "2",
                     "--j", "1")
    assert code == EXIT_OK


def test_selftest(capsys):
    code, rep = call(capsys, "selftest")
    assert code == EXIT_OK
    assert all(c["ok"] for c in rep["results"]["checks"])


def test_lvalue(capsys):
    code, rep = call(capsys, "lvalue", "--f", "delta_e10", "--g", "delta", "--s", "21")
    assert code == EXIT_OK
    assert rep["results"]["value"]["center"].startswith("1.00208920444")


def test_lvalue_both(capsys):
    code, rep = call(capsys, "lvalue", "--f", "delta_e10", "--g", "delta", "--s", "21",
                     "--method", "both", "--nmax", "400")
    assert code == EXIT_OK
    assert rep["results"]["agree"]
    assert rep["results"]["epsilon_solved"][0].startswith("0.99999999")
