import json

import pytest

from mgonal.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--m", "5", "--coeffs", "1,1,1,1,1",
                       "--x", "1,1,1,0,0", "--format", "json")
    assert code == 0
    assert json.loads(out)["value"] == 3


def test_represent_json_witness(capsys):
    code, out, _ = run(capsys, "represent", "--m", "5", "--coeffs", "1,1,1,1,1",
                       "--n", "33", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["represented"] is True
    assert sum(
        a * ((5 - 2) * (x * x - x) // 2 + x)
        for a, x in zip(data["form"]["coeffs"], data["witness"])
    ) == 33


def test_represent_expectation_failure(capsys):
    code, out, _ = run(capsys, "represent", "--m", "4", "--coeffs", "2,3",
                       "--n", "1", "--expect-represented")
    assert code == 1


def test_kconst(capsys):
    code, out, _ = run(capsys, "kconst", "--m", "5", "--coeffs", "1,1,1,1,1")
    assert code == 0
    assert "K = 7" in out
    code, out, _ = run(capsys, "kconst", "--m", "5", "--coeffs", "1,1,1,1,1",
                       "--format", "json")
    data = json.loads(out)
    assert data["value"] == 7 and data["factors"] == [{"p": 2, "exponent": 1}]


def test_local_rule_four(capsys):
    code, out, _ = run(capsys, "local", "--m", "8", "--coeffs", "1,1,1,1,1",
                       "--n", "1", "--prime", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["represented"] is True and data["rule"] == 4


def test_local_all_primes(capsys):
    code, out, _ = run(capsys, "local", "--m", "7", "--coeffs", "6,10,15,1,1",
                       "--n", "4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [v["p"] for v in data["verdicts"]] == [2, 3]


def test_exceptional_stable_bytes(capsys):
    args = ("exceptional", "--m", "5", "--coeffs", "1,1,1,1,1", "--bound",
            "500", "--jobs", "1", "--format", "json", "--stable-output")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    assert data["exceptional"] == [] and "timings" not in data


def test_admissible_k(capsys):
    code, out, _ = run(capsys, "admissible-k", "--m", "5",
                       "--coeffs", "1,1,1,1,1", "--n", "10", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["pairs"] and data["k_bound"] == 7


def test_jordan(capsys):
    code, out, _ = run(capsys, "jordan", "--m", "5", "--coeffs", "1,1,1,1,1",
                       "--prime", "3", "--precision", "10", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["det"] == 5
    assert sum(len(b["block"]) for b in data["blocks"]) == 4


def test_scaling_csv(capsys):
    code, out, _ = run(capsys, "scaling", "--coeffs", "1,1,1,1,1",
                       "--m-min", "5", "--m-max", "6", "--multiplier", "2",
                       "--format", "csv", "--stable-output")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "m,bound,max_exceptional,seconds"
    assert lines[1].startswith("5,54,0")


def test_usage_errors(capsys):
    code, _, err = run(capsys, "represent", "--m", "5", "--coeffs", "1,1,x",
                       "--n", "3")
    assert code == 2
    code, _, err = run(capsys, "represent", "--m", "5", "--coeffs", "1,1,1,1,1",
                       "--n", "3", "--prime", "7")
    assert code == 2
    assert "--prime" in err or "unrecognized" in err


def test_unknown_flag_suggestion(capsys):
    code, _, err = run(capsys, "kconst", "--m", "5", "--coeffs", "1,1,1,1,1",
                       "--bouund", "7")
    assert code == 2
    assert "did you mean" in err


def test_nonprimitive_form_is_usage_error(capsys):
    code, _, err = run(capsys, "kconst", "--m", "5", "--coeffs", "2,4,6,8,10")
    assert code == 2
    assert "primitive" in err
