import json

import pytest

from hyperheis.cli import execute, main
from hyperheis.verma import ModuleVector


def run(*argv):
    return execute(list(argv))


def test_pq_table():
    code, out, _ = run("pq", "--r", "1", "--symbolic", "--k-max", "2")
    assert code == 0
    assert "P[0,-1] = -1/4*a1" in out
    assert "Q[2,-1] = 2*a1^-1" in out


def test_heisenberg_bracket():
    code, out, _ = run("bracket", "--r", "2", "b[1]", "b[-1]")
    assert (code, out.strip()) == (0, "-2*1_0")


def test_current_algebra_bracket_and_jacobi():
    assert run("bracket", "--r", "1", "h(t)", "h(t^-1)")[1].strip() == "-2*w0"
    code, out, _ = run("jacobi", "--r", "1", "e(t u)", "f(t^-1 u)", "h(1)")
    assert code == 0 and out.strip() == "0"


def test_reduce_command():
    assert run("reduce", "--r", "1", "u dt")[1].strip() == "-1/4*a1*w1"
    assert run("reduce", "--a=-2", "u dt")[1].strip() == "1/2*w1"


def test_audit_reports_ratio():
    code, out, _ = run("audit", "--r", "1", "--window", "4", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["H2"]["verdict"] == "constant ratio" and rep["H2"]["ratio"] == "2"
    assert rep["H1"]["verdict"] == rep["H3"]["verdict"] == "match"


def test_bad_inputs_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("probe", "--config", str(bad))[0] == 2
    assert run("reduce", "--r", "1", "t^ dt")[0] == 2
    assert run("probe", "--r", "1", "--symbolic")[0] == 2
    assert run("probe", "--a=0")[0] == 2
    assert run("validate-weights", "--a=-2", "--weights", '{"chi": ["1", "2"]}')[0] == 2
    assert run("nonsense")[0] == 2


def test_validate_weights_exit_codes():
    code, out, _ = run("validate-weights", "--a=-2", "--weights", '{"chi": ["1"]}')
    assert code == 1
    assert "[b1[0], b[1]]: (1/2)*chi1 = 1/2 != 0" in out
    assert run("validate-weights", "--a=-2")[0] == 0


def test_act_and_witness():
    assert run("act", "--a=-2", "b[1]", "b[-1]^3 v")[1].strip() == "-6*b[-1]^2 v"
    assert run("witness", "--a=-2", "b[-1] v")[1].strip() == "b[1]: -2*v"


def test_certify_json_round_trip():
    code, out, _ = run("certify", "--a=-2", "b[-1]^2 v", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["replayed"] is True
    assert data["certificate"]["final_scalar"] == "8"
    start = ModuleVector.from_json(data["certificate"]["start"])
    assert str(start) == "b[-1]^2 v"
    assert start.to_json() == data["certificate"]["start"]


def test_probe_and_submodule_exit_codes():
    assert run("probe", "--a=-2", "--max-degree", "2", "--n-random", "3")[0] == 0
    zero = '{"kappa0": "0", "chi": ["0"]}'
    assert run("probe", "--a=-2", "--max-degree", "2", "--weights", zero)[0] == 1
    assert run("submodule-check", "--a=-2", "--max-degree", "2", "--weights", zero)[0] == 0
    leak = '{"kappa0": "0", "chi": ["1"]}'
    assert run("submodule-check", "--a=-2", "--max-degree", "1", "--weights", leak)[0] == 1


def test_text_and_json_agree():
    _, text, _ = run("probe", "--a=-2", "--max-degree", "2", "--n-random", "3")
    _, js, _ = run("probe", "--a=-2", "--max-degree", "2", "--n-random", "3", "--format", "json")
    assert json.loads(js)["verdict"] in text


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"a": ["-2"], "max_degree": 1, "format": "json", "n_random": 2}))
    _, out, _ = run("probe", "--config", str(cfg))
    assert [row["degree"] for row in json.loads(out)["per_degree"]] == [1]
    _, out, _ = run("probe", "--config", str(cfg), "--max-degree", "2")
    assert [row["degree"] for row in json.loads(out)["per_degree"]] == [1, 2]


def test_json_is_deterministic():
    argv = ["probe", "--a=-3/2,5", "--max-degree", "2", "--seed", "9", "--format", "json"]
    assert run(*argv)[1] == run(*argv)[1]


def test_main_returns_code(capsys):
    assert main(["bracket", "--r", "1", "b[1]", "b[-1]"]) == 0
    assert capsys.readouterr().out.strip() == "-2*1_0"


@pytest.mark.parametrize("cmd", ["pq", "reduce", "bracket", "jacobi", "audit", "validate-weights", "act",
                                 "witness", "certify", "probe", "submodule-check"])
def test_help_available(cmd):
    with pytest.raises(SystemExit) as exc:
        main([cmd, "--help"])
    assert exc.value.code == 0
