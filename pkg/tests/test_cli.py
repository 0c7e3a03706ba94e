import json

import pytest

from tkkcones import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("words, n, r, dim", [
    (["I", "2", "2"], 4, 2, 15),
    (["I", "1", "3"], 3, 1, 15),
    (["III", "2"], 3, 2, 10),
    (["IV", "4"], 4, 2, 15),
    (["spin", "3"], 3, 2, 10),
])
def test_info_values(capsys, words, n, r, dim):
    code, out, _ = run(capsys, "info", *words, "--export", "json")
    assert code == 0
    rep = json.loads(out)
    assert (rep["n"], rep["rank"], rep["dim_g"]) == (n, r, dim)
    assert rep["dim_g"] == rep["dim_g_closed_form"]


def test_text_output_lists_fields(capsys):
    code, out, _ = run(capsys, "info", "II", "4")
    assert code == 0
    assert "dim_g" in out and "rank" in out


@pytest.mark.parametrize("argv", [
    ["info", "V", "3"],
    ["info", "I", "0", "2"],
    ["info", "I", "2"],
    ["bogus", "I", "1", "1"],
    ["info", "I", "1", "1", "--tol", "1e-2"],
    ["info", "I", "1", "1", "--samples", "0"],
    ["info", "I", "1", "1", "--seed", "xyz"],
    ["info", "I", "1", "1", "--export", "dot"],
    ["semigroup-roundtrip", "III", "2", "--samples", "2"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_strata_small(capsys):
    code, out, _ = run(capsys, "strata", "I", "1", "1", "--samples", "3", "--export", "json")
    assert code == 0
    rep = json.loads(out)
    assert len(rep["labels"]) == 3
    assert all(row["correct"] == row["samples"] == row["conjugation_invariant"] for row in rep["strata"])


def test_faces_pass_and_dot(capsys):
    code, out, _ = run(capsys, "faces", "I", "1", "1", "--samples", "20", "--export", "dot")
    assert code == 0
    assert out.startswith("digraph") and "->" in out


def test_faces_gap_exits_1(capsys):
    # the Cartan slice audit leaves unmatched faces for I(2,2)
    code, out, err = run(capsys, "faces", "I", "2", "2", "--samples", "20", "--export", "json")
    assert code == 1
    rep = json.loads(out)
    assert rep["classes"] == rep["expected_classes"] == 6
    assert rep["cartan_slice_audit"]["unmatched"]
    assert json.loads(err)["status"] == "audit failure"


def test_roundtrip_and_determinism(capsys, tmp_path):
    argv = ["semigroup-roundtrip", "I", "1", "2", "--samples", "10", "--seed", "0x2A", "--export", "json"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    assert json.loads(first)["max_roundtrip_residual"] < 1e-9
    _, second, _ = run(capsys, *argv)
    assert first == second
    target = tmp_path / "rep.json"
    assert run(capsys, *argv, "--out", str(target))[0] == 0
    assert target.read_text() == first


def test_dumps_rationals_and_floats():
    from flint import fmpq

    text = cli.dumps({"q": fmpq(-3, 4), "x": 0.1})
    assert '"-3/4"' in text and "0.10000000000000001" in text
