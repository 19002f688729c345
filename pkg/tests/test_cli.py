import json

import pytest
from typer.testing import CliRunner

from app.cli import EXIT_DEGENERATE, EXIT_PARSE_ERROR, EXIT_VERDICT_FAILED, app

try:
    runner = CliRunner(mix_stderr=False)
except TypeError:  # click >= 8.2 always keeps stderr separate
    runner = CliRunner()

A3_1_MODULE = {"divisors": [3], "q_mod1": ["1/3"], "gram_mod1": [["2/3"]]}
A3_2_MODULE = {"divisors": [3], "q_mod1": ["2/3"], "gram_mod1": [["1/3"]]}


@pytest.fixture
def write_json(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
        return str(path)

    return write


def test_analyze_expression():
    result = runner.invoke(app, ["analyze", "--lattice", "A2"])
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["profile"]["level"] == 3
    assert data["milgram_signature"] == 2
    assert data["anisotropic"] is True


def test_analyze_gram_file(write_json):
    path = write_json("u.json", {"gram": [[0, 1], [1, 0]]})
    result = runner.invoke(app, ["analyze", path])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["profile"]["witt_index"] == 1


def test_analyze_stdin():
    result = runner.invoke(app, ["analyze", "-"], input=json.dumps({"gram": [[2, -1], [-1, 2]]}))
    assert result.exit_code == 0
    assert json.loads(result.stdout)["fqm"]["divisors"] == [3]


def test_malformed_json(write_json):
    path = write_json("bad.json", "{not json")
    assert runner.invoke(app, ["analyze", path]).exit_code == EXIT_PARSE_ERROR


def test_odd_gram(write_json):
    path = write_json("odd.json", {"gram": [[1, 0], [0, 2]]})
    assert runner.invoke(app, ["analyze", path]).exit_code == EXIT_PARSE_ERROR


def test_degenerate_gram(write_json):
    path = write_json("degenerate.json", {"gram": [[2, 2], [2, 2]]})
    assert runner.invoke(app, ["analyze", path]).exit_code == EXIT_DEGENERATE


def test_missing_input():
    assert runner.invoke(app, ["analyze"]).exit_code == EXIT_PARSE_ERROR


def test_weil_relations():
    result = runner.invoke(app, ["weil", "--lattice", "A2", "--gamma", "0,-1,1,0"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert all(data["relations"].values())
    assert len(data["rho_gamma"]) == 3


def test_weil_bad_gamma():
    assert runner.invoke(app, ["weil", "--lattice", "A2", "--gamma", "1,2"]).exit_code == EXIT_PARSE_ERROR


def test_gauss_on_module_file(write_json):
    path = write_json("a3.json", A3_2_MODULE)
    result = runner.invoke(app, ["gauss", path])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["milgram_signature"] == 6


def test_check_converse():
    assert runner.invoke(app, ["check-converse", "--lattice", "A2+A2+U+U"]).exit_code == 0
    failed = runner.invoke(app, ["check-converse", "--lattice", "A2+U+U"])
    assert failed.exit_code == EXIT_VERDICT_FAILED
    assert set(json.loads(failed.stdout)["failing"]) == {"m_mod4", "m_bound"}


def test_theta_csv():
    result = runner.invoke(app, ["theta", "--lattice", "A2", "--n-max", "1", "--format", "csv"])
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "coset,n,count"
    assert "0,1,6" in lines
    assert "1,1/3,3" in lines


def test_theta_bad_format():
    assert runner.invoke(app, ["theta", "--lattice", "A2", "--format", "xml"]).exit_code == EXIT_PARSE_ERROR


def test_reflective(write_json):
    module = write_json("a3.json", A3_1_MODULE)
    pp = write_json("pp.json", {"terms": [{"mu": [1], "n": "-1/3", "c": "1"}, {"mu": [2], "n": "-1/3", "c": "1"}]})
    result = runner.invoke(app, ["reflective", module, "--principal-part", pp])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["passed"] is True


def test_reflective_symmetrized_fails_strictly(write_json):
    module = write_json("a3.json", A3_1_MODULE)
    pp = write_json("pp.json", {"terms": [{"mu": [1], "n": "-1/3", "c": "1"}]})
    result = runner.invoke(app, ["reflective", module, "--principal-part", pp, "--symmetrize"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["symmetrized_passed"] is False


def test_reflective_inconsistent_exponent(write_json):
    module = write_json("a3.json", A3_1_MODULE)
    pp = write_json("pp.json", {"terms": [{"mu": [1], "n": "-2/3", "c": "1"}]})
    result = runner.invoke(app, ["reflective", module, "--principal-part", pp])
    assert result.exit_code == EXIT_PARSE_ERROR


def test_lfactor_zero_term():
    result = runner.invoke(app, ["lfactor", "--lattice", "A2", "--m", "8", "--primes", "3"])
    assert result.exit_code == EXIT_VERDICT_FAILED
    terms = json.loads(result.stdout)["nonvanishing"]["terms"]
    assert terms[0]["verdict"] == "zero-certified"


def test_lfactor_with_assembly():
    result = runner.invoke(
        app,
        ["lfactor", "--lattice", "A2", "--m", "12", "--primes", "2,3",
         "--L-value", "1", "--vol", "1", "--c-s0", "1"],
    )
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert "l2_norm" in data


def test_scan_json():
    result = runner.invoke(app, ["scan", "--max-order", "3"])
    assert result.exit_code == 0
    rows = json.loads(result.stdout)
    assert [row["order"] for row in rows] == [1, 3, 3]


def test_scan_table():
    result = runner.invoke(app, ["scan", "--max-order", "3", "--table"])
    assert result.exit_code == 0
    assert "A_3^1" in result.stdout
