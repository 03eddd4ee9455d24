import json

import pytest

from pftori.cli import main, parse_complex_arg
from pftori.scalars import QI, PiLinear

SQUARE = {"n": 1, "T": [[{"re": "0", "im": "1"}]]}
W_JSON = {"rank": 2, "r": 2, "V": [[[["0"], ["1"]], [["1"], ["0"]]]], "U": [[[["1"], ["0"]], [["0"], ["-1"]]]]}


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("text,value", [("i", QI(0, 1)), ("2i", QI(0, 2)), ("1/2+3/2i", QI("1/2", "3/2")),
                                        ("-i", QI(0, -1)), ("0", 0), ("pi", PiLinear(0, 1)),
                                        ('{"re": "1", "im": "2"}', QI(1, 2))])
def test_parse_complex_arg(text, value):
    assert parse_complex_arg(text) == value


def test_validate_ok_and_not_holomorphic(tmp_path, capsys):
    torus = write(tmp_path, "t.json", {"n": 2, "T": [[{"re": "0", "im": "1"}, "0"], ["0", {"re": "0", "im": "1"}]]})
    good = write(tmp_path, "b.json", {"r": 1, "A": [[1, 0], [0, 2]]})
    bad = write(tmp_path, "c.json", {"r": 1, "A": [[0, 1], [0, 0]]})
    code, out = run(capsys, ["validate", "--torus", torus, "--bundle", good])
    assert code == 0 and out["holomorphic"]
    code, out = run(capsys, ["validate", "--torus", torus, "--bundle", bad])
    assert code == 1 and not out["holomorphic"]


def test_invalid_torus_is_malformed(tmp_path, capsys):
    torus = write(tmp_path, "t.json", {"n": 1, "T": [[{"re": "0", "im": "-1"}]]})
    code, out = run(capsys, ["validate", "--torus", torus])
    assert code == 2 and "error" in out


def test_malformed_json(tmp_path, capsys):
    path = write(tmp_path, "t.json", "{not json")
    code, out = run(capsys, ["validate", "--torus", path])
    assert code == 2 and "not valid JSON" in out["error"]
    code, _ = run(capsys, ["validate", "--torus", str(tmp_path / "missing.json")])
    assert code == 2


def test_pairings(tmp_path, capsys):
    torus = write(tmp_path, "t.json", SQUARE)
    bundle = write(tmp_path, "b.json", {"r": 1, "A": [[1]]})
    code, out = run(capsys, ["pairings", "--torus", torus, "--bundle", bundle])
    assert code == 0 and len(out["pairings"]) == 4


def test_pairings_precondition(tmp_path, capsys):
    torus = write(tmp_path, "t.json", {"n": 2, "T": [[{"re": "0", "im": "1"}, "0"], ["0", {"re": "0", "im": "1"}]]})
    bundle = write(tmp_path, "b.json", {"r": 1, "A": [[0, 1], [0, 0]]})
    code, out = run(capsys, ["pairings", "--torus", torus, "--bundle", bundle])
    assert code == 1 and out["kind"] == "precondition failed"


def test_automorphy_with_and_without_cocycle(tmp_path, capsys):
    torus = write(tmp_path, "t.json", SQUARE)
    given = write(tmp_path, "b.json", {"r": 2, "A": [[1]], "mu": {"re": ["pi"], "im": ["0"]}, "cocycle": W_JSON})
    code, out = run(capsys, ["automorphy", "--torus", torus, "--bundle", given, "--samples", "10"])
    assert code == 0 and out["cocycle_source"] == "input"
    bare = write(tmp_path, "c.json", {"r": 2, "A": [[1]]})
    code, out = run(capsys, ["automorphy", "--torus", torus, "--bundle", bare, "--samples", "10",
                             "--finite-difference"])
    assert code == 0 and out["cocycle_source"] == "standard construction" and "fd_residual_max" in out


def test_heisenberg_mindim(capsys):
    code, out = run(capsys, ["heisenberg", "mindim", "--r", "2", "--A", "[[1,0],[0,1]]"])
    assert code == 0
    assert out == {"elementary_divisors": [1, 1], "exists_at_rank_r": False, "m": 4}


def test_heisenberg_construct_and_verify(tmp_path, capsys):
    code, out = run(capsys, ["heisenberg", "construct", "--r", "2", "--A", "[[1]]"])
    assert code == 0 and out["verified"]
    path = write(tmp_path, "w.json", out["cocycle"])
    code, out = run(capsys, ["heisenberg", "verify", "--r", "2", "--A", "[[1]]", "--cocycle", path])
    assert code == 0 and out["valid"]
    code, out = run(capsys, ["heisenberg", "construct", "--r", "2", "--A", "[[1,0],[0,1]]"])
    assert code == 1


def test_heisenberg_search_and_guard(capsys):
    code, _ = run(capsys, ["heisenberg", "search", "--r", "3", "--A", "[[1]]"])
    assert code == 0
    code, out = run(capsys, ["heisenberg", "search", "--r", "7", "--A", "[[1]]"])
    assert code == 2 and out["kind"] == "malformed input"


def test_heisenberg_bad_matrix(capsys):
    code, _ = run(capsys, ["heisenberg", "mindim", "--r", "2", "--A", "[[1,2]]"])
    assert code == 2
    code, _ = run(capsys, ["heisenberg", "verify", "--r", "2", "--A", "[[1]]"])
    assert code == 2


def test_mirror_intersect(tmp_path, capsys):
    L1 = write(tmp_path, "l1.json", {"r": 1, "A": [[1, 0], [0, 1]], "p": ["0", "0"]})
    L2 = write(tmp_path, "l2.json", {"r": 1, "A": [[1, 0], [0, 0]], "p": ["0", "pi"]})
    code, out = run(capsys, ["mirror", "intersect", "--L1", L1, "--L2", L2])
    assert code == 0 and out["codim"]["codim"] == 1 and out["cone_pf_possible"]
    torus = write(tmp_path, "t.json", {"n": 2, "T": [[{"re": "0", "im": "1"}, "0"], ["0", {"re": "0", "im": "1"}]]})
    code, out = run(capsys, ["mirror", "intersect", "--L1", L1, "--L2", L2, "--torus", torus, "--mode", "torus"])
    assert code == 0 and len(out["lagrangian"]) == 2


def test_cone_check(capsys):
    code, out = run(capsys, ["cone", "check", "--r", "1", "--A", "[[1]]", "--s", "2", "--B", "[[-2]]"])
    assert code == 0 and out["target"] == {"t": 3, "C": [[-1]]} and out["pf"]
    argv = ["cone", "check", "--r", "1", "--A", "[[1,0,0],[0,1,0],[0,0,1]]", "--s", "1", "--B",
            "[[0,0,0],[0,0,0],[0,0,0]]"]
    code, out = run(capsys, argv)
    assert code == 0 and not out["pf"] and out["ci_factorization"] == {"3": True}
    code, _ = run(capsys, argv + ["--require-flat"])
    assert code == 1


def test_fixture(capsys):
    code, out = run(capsys, ["fixture", "section5"])
    assert code == 0 and out["ok"]
    code, out = run(capsys, ["fixture", "section5", "--tau", "2i", "--mu", "pi", "--nu", "2pii"])
    assert code == 0
    code, _ = run(capsys, ["fixture", "section5", "--tau=-i"])
    assert code == 2


def test_suite_subset(capsys):
    code, out = run(capsys, ["suite", "--only", "6"])
    assert code == 0 and [c["criterion"] for c in out["criteria"]] == [6]
    code, _ = run(capsys, ["suite", "--only", "42"])
    assert code == 2


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["heisenberg", "mindim"]) == 2
    capsys.readouterr()
