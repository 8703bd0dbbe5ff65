import json

import pytest

from upbwit import pipeline
from upbwit.cli import main
from upbwit.states import builtin_family, save_state_set


def test_families(capsys):
    assert main(["families"]) == 0
    out = capsys.readouterr().out
    for name in ("tiles", "example_b2", "tiles_perturbed"):
        assert name in out


def test_analyze_tiles(tmp_path, capsys):
    path = tmp_path / "tiles.json"
    assert main(["analyze", "--family", "tiles", "--samples", "20000", "--json", str(path)]) == 0
    report = json.loads(path.read_text())
    assert report["verdict"] == "certified-inseparable-PPT"
    assert report["conditions"]["cond1"] and report["conditions"]["cond3"]
    assert report["p_exact"] == ["1/5"] * 5
    assert "verdict: certified-inseparable-PPT" in capsys.readouterr().out


def test_analyze_example_b2(tmp_path, capsys):
    path = tmp_path / "b2.json"
    assert main(["analyze", "--family", "example_b2", "--json", str(path)]) == 4
    report = json.loads(path.read_text())
    assert report["conditions"]["cond3"] is False
    assert report["conditions"]["lhs"] < report["conditions"]["rhs"]
    assert report["conditions"]["rhs"] == pytest.approx(0.0871530452835, abs=1e-12)
    assert report["p_exact"] == ["3/8", "3/8", "1/4"]
    assert report["verdict"] == "inconclusive"
    assert "3/8" in capsys.readouterr().out


def test_analyze_perturbed(capsys):
    code = main(["analyze", "--family", "tiles_perturbed", "--t", "0.05", "--samples", "20000"])
    assert code == 0
    assert "verdict: certified-inseparable" in capsys.readouterr().out


def test_analyze_file_and_exit_codes(tmp_path, capsys):
    path = tmp_path / "b2.json"
    save_state_set(builtin_family("example_b2"), path)
    assert main(["analyze", "--file", str(path)]) == 4
    extendible = tmp_path / "ext.json"
    extendible.write_text(json.dumps({"dims": [2, 2], "members": [[[[1, 0], [0, 0]], [[1, 0], [0, 0]]], [[[0, 0], [1, 0]], [[0, 0], [1, 0]]]]}))
    assert main(["analyze", "--file", str(extendible)]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dims": [2, 2], "members": [[[[2, 0], [0, 0]], [[1, 0], [0, 0]]]]}))
    assert main(["analyze", "--file", str(bad)]) == 2
    assert main(["analyze", "--file", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_json_round_trip_and_seed(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["analyze", "--family", "example_b2", "--seed", "3", "--restarts", "32"]
    main(argv + ["--json", str(a)])
    main(argv + ["--json", str(b)])
    text = a.read_text()
    assert text == b.read_text()
    assert pipeline.dumps(json.loads(text)) == text


def test_frustum_csv(capsys):
    assert main(["frustum", "--family", "tiles", "--steps", "100"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    t_b = float(lines[0].split()[1].split("=")[1])
    rows = [line.split(",") for line in lines[2:]]
    assert len(rows) == 101
    assert rows[0][3] == "known separable by cited ball result"
    for t, _, _, label in rows:
        if float(t) > t_b:
            assert label == "inseparable-PPT"
        elif float(t) > 0:
            assert label == "not certified"


def test_frustum_steps_one(capsys):
    assert main(["frustum", "--family", "tiles", "--steps", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4


def test_frustum_refuses_non_orthogonal(capsys):
    assert main(["frustum", "--family", "example_b2"]) != 0
    assert "orthonormal" in capsys.readouterr().err


def test_epsilon(capsys):
    assert main(["epsilon", "--family", "example_b2", "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "seesaw_value" in out and "oracle_value" in out


@pytest.mark.parametrize("group,count", [("example2", 4), ("tiles", 3), ("example1", 3), ("reverse", 1)])
def test_reproduce_only(group, count, capsys):
    assert main(["reproduce-paper", "--only", group]) == 0
    lines = [x for x in capsys.readouterr().out.splitlines() if x.startswith("[PASS]")]
    assert len(lines) == count


def test_fmt_normalizes():
    assert pipeline.fmt(-0.0) == "0"
    assert pipeline.fmt(1 / 3) == "0.333333333333"
    assert pipeline.rational(0.375) == "3/8"
    assert pipeline.rational(0.1234567891234) is None
