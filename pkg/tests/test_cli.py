import io

import pytest

from regressia import __version__, cli

from battery import BATTERY, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_ot_prints_13():
    code, out, _ = call("ot", "3")
    assert code == 0 and out.strip() == "13"


def test_intro_example():
    code, out, _ = call("regressive-values", "--example", "intro")
    assert code == 0 and out.strip() == "{0}"


def test_identity_is_sharp():
    code, out, _ = call("check-assignment", "--builtin", "identity", "--prop", "sharp")
    assert code == 0 and "holds" in out


def test_order_type():
    code, out, _ = call("order-type", "5", "2", "5")
    assert code == 0 and out.strip() == "(1, 0, 1)"


def test_report_fields():
    code, rep, _ = run(["ot", "2", "--seed", "17"])
    assert code == 0
    for key in ("statement", "params", "seed", "version", "caps", "elapsed_s", "jobs"):
        assert key in rep
    assert rep["seed"] == 17 and rep["version"] == __version__ and rep["value"] == 3


def test_env_seed_overrides(monkeypatch):
    monkeypatch.setenv("REGRESSIA_SEED", "42")
    _, rep, _ = run(["ot", "1", "--seed", "3"])
    assert rep["seed"] == 42
    monkeypatch.setenv("REGRESSIA_SEED", "x")
    assert call("ot", "1")[0] == 3


def test_property_failure_exits_1_with_counterexample():
    code, rep, _ = run(["transfer", "--instance", "/nonexistent.json"])
    assert code == 3
    code, rep, _ = run(["df", "--formula", "bef q=2 t=1 r=1 : f1 < x1", "--set", "[[1, 2]]"])
    assert code == 3  # not closed
    code, rep, _ = run(["check-regular", "--map", "[[[0], 0], [[1], 0], [[2], 1], [[3], 0]]",
                        "--E", "1,2,3"])
    assert code == 1 and rep["verdict"] == "fails" and rep["counterexample"]


def test_budget_exits_2():
    assert call("search-04", "--n", "20", "--p", "10", "--max-candidates", "10")[0] == 2
    assert call("ot", "5", "--cap", "max_ot_arity=4")[0] == 2


def test_input_errors_exit_3():
    assert call("no-such-command")[0] == 3
    assert call("ot")[0] == 3
    assert call("ot", "2", "--cap", "bogus=1")[0] == 3
    assert call("bef-eval", "--formula", "bef q=2 : ((", "--args", "1")[0] == 3
    code, _, err = call("ot", "notanint")
    assert code == 3 and err.startswith("error:")


def test_csv_format():
    code, out, _ = call("ot", "3", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "field,value" and "value,13" in lines


def test_json_round_trip():
    _, rep, _ = run(["search-04", "--example", "square", "--n", "12", "--p", "5"])
    again = run(rep["argv"][:-2])[1]
    assert cli.strip_timing(again) == cli.strip_timing(rep)


def test_jobs_is_recorded():
    _, rep, _ = run(["ot", "2", "--jobs", "4"])
    assert rep["jobs"] == 4


@pytest.mark.parametrize("argv", BATTERY, ids=lambda a: " ".join(a[:3]))
def test_battery_runs(argv):
    code, rep, err = run(argv)
    assert code in (0, 1, 2), err
    assert rep["statement"] and rep["seed"] is not None
