import io
import json

import pytest

from quiver_vertex.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_vertex_both_methods_agree():
    code, text = run("vertex", "-p", "2,1", "-D", "3", "--method", "both")
    assert code == 0
    res = json.loads(text)
    assert res["diff"] == []
    assert res["variables"] == ["z-1", "z0", "z1"]
    assert res["product"] == res["localization"]
    assert res["product"][0] == {"coeff": "1/1", "exp": [0, 0, 0]}


def test_output_flag_positions():
    a = run("--output", "text", "vertex", "-p", "1", "-D", "1")
    b = run("vertex", "-p", "1", "-D", "1", "--output", "text")
    assert a == b and a[0] == 0
    assert "partition: 1" in a[1]


def test_capped_eval_and_pole():
    code, text = run("capped", "-p", "1", "--eval", "z0=1/3")
    assert code == 0
    assert json.loads(text)["value"] == "11/14"      # (1 - 1/3)/(1 - 5/33)
    code, text = run("capped", "-p", "1", "--eval", "z0=11/5")
    assert code == 2 and "pole" in json.loads(text)["error"]


def test_capped_series():
    code, text = run("capped", "-p", "2,2", "-n", "0", "-r", "2", "--series", "-D", "2")
    res = json.loads(text)
    assert code == 0 and res["expression"]["prefactor"] == {"h": 1}
    assert res["series"][0]["exp"] == [0, 0, 0]


def test_chamber_commands():
    code, text = run("chamber", "-p", "2,2", "--enumerate")
    assert code == 0 and json.loads(text)["count"] == 18
    code, text = run("chamber", "-p", "2,1", "--theta", "1,1,1")
    assert code == 0 and json.loads(text)["p"] == 0
    code, text = run("chamber", "-p", "2,1", "--theta", "1,-1,0")
    assert code == 2 and "wall" in json.loads(text)["error"]


def test_character_command():
    code, text = run("character", "-p", "3,3,3", "-n", "0", "-r", "1")
    res = json.loads(text)
    assert code == 0
    assert res["character"] == {"0": "1", "1": "1", "2": "1"}
    assert res["limit"]["prefactor"] == res["character"]


def test_monodromy_command_reports_failure_honestly():
    code, text = run("monodromy", "-p", "1", "--theta1", "1", "--theta2", "-1", "--samples", "3")
    res = json.loads(text)
    assert code == 2
    assert res["pass"]["stab"] and res["pass"]["periodicity"] and res["pass"]["qde"]
    assert not res["pass"]["ratio_vs_formula"]
    code, text = run("monodromy", "-p", "1", "--theta1", "1", "--theta2", "1", "--samples", "2")
    assert code == 0


def test_monodromy_nonconvergence():
    code, text = run("monodromy", "-p", "1", "--theta1", "1", "--theta2", "-1",
                     "--q", "0.9", "--tol", "1e-300", "--samples", "1")
    assert code == 3


@pytest.mark.parametrize("argv", [
    ["vertex"],
    ["vertex", "-p", "2,3"],
    ["vertex", "-p", "1", "--q", "1/2", "--hbar", "1/4"],
    ["capped", "-p", "2,1", "-n", "5"],
    ["capped", "-p", "2,1", "--eval", "z0=1"],
    ["chamber", "-p", "2,1"],
    ["chamber", "-p", "2,1", "--theta", "1,1"],
    ["selftest", "--contexts", "9"],
    ["nonsense"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as e:
        code = main(argv, io.StringIO())
        raise SystemExit(code)
    assert e.value.code == 1


def test_quick_selftest_deterministic():
    a = run("selftest", "--quick", "--seed", "3")
    b = run("selftest", "--quick", "--seed", "3")
    assert a == b
    res = json.loads(a[1])
    assert res["mode"] == "quick"
    ctx = next(k for k in res["suites"] if k.startswith("ctx0"))
    for name in ("oracle", "capped_action", "eigenfunction", "gluing", "character",
                 "qde_series", "independence"):
        assert res["suites"][ctx][name]["pass"], name
