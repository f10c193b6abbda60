import json

import pytest

from segstab.cli import main


@pytest.fixture
def gap_file(tmp_path):
    path = tmp_path / "gap.json"
    assert main(["gen", "--family", "gap", "--output", str(path)]) == 0
    return path


def test_lp_prints_value_and_nonzeros(gap_file, capsys):
    capsys.readouterr()
    assert main(["lp", "--input", str(gap_file)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "8.000000000"
    assert out[1].split()[1] == "0.500000000"


def test_solve_derandomized_json(gap_file, tmp_path, capsys):
    out_path = tmp_path / "res.json"
    assert main(["solve", "--input", str(gap_file), "--derandomize", "--output", str(out_path)]) == 0
    doc = json.loads(out_path.read_text())
    assert doc["bound_satisfied"] is True
    assert doc["lp_value"] == pytest.approx(8.0)
    assert doc["ratio_vs_lp"] == pytest.approx(doc["cost"] / 8.0)
    assert doc["feasible"] is True


def test_solve_seeded_and_trials(gap_file, capsys):
    capsys.readouterr()
    assert main(["solve", "--input", str(gap_file), "--variant", "unweighted", "--seed", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["seed"] == 4 and doc["variant"] == "unweighted"
    assert main(["solve", "--input", str(gap_file), "--trials", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 7 and lines[-2].startswith("mean ") and lines[-1].startswith("mean/LP ")


def test_solve_transpose_and_best(gap_file, capsys):
    capsys.readouterr()
    assert main(["solve", "--input", str(gap_file), "--transpose", "--seed", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["feasible"]
    assert main(["solve", "--input", str(gap_file), "--best", "--seed", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["feasible"]


def test_multi_with_objects_reports_h(tmp_path, capsys):
    path = tmp_path / "obj.json"
    main(["gen", "--family", "random", "--object-size", "2", "--seed", "3", "--npoints", "14", "--grid", "5", "--output", str(path)])
    capsys.readouterr()
    assert main(["solve", "--input", str(path), "--variant", "multi", "--derandomize"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["h"] == 2 and doc["bound_satisfied"] and doc["feasible"]


def test_multi_three_directions(tmp_path, capsys):
    path = tmp_path / "d3.json"
    main(["gen", "--family", "random", "--directions", "1,0", "0,1", "1,1", "--seed", "2", "--npoints", "14", "--grid", "5", "--output", str(path)])
    capsys.readouterr()
    assert main(["solve", "--input", str(path), "--variant", "multi", "--k", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["d"], doc["k"]) == (3, 2)


def test_localsearch_and_oracle(gap_file, capsys):
    capsys.readouterr()
    assert main(["oracle", "--input", str(gap_file)]) == 0
    assert json.loads(capsys.readouterr().out)["cost"] == 10
    assert main(["localsearch", "--input", str(gap_file), "--t", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["cost"] >= 10
    assert main(["oracle", "--input", str(gap_file), "--cap", "8"]) == 2


def test_bench_writes_json_and_csv(tmp_path, capsys):
    js, cs = tmp_path / "r.json", tmp_path / "r.csv"
    assert main(["bench", "--family", "grid", "--k", "3", "--trials", "500", "--output", str(js), "--csv", str(cs)]) == 0
    assert json.loads(js.read_text())["opt"] == 27
    assert len(cs.read_text().splitlines()) == 501


def test_errors_exit_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": []}')
    assert main(["lp", "--input", str(bad)]) == 2
    assert "segments" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(["solve"])
