import csv

import pytest

from parkflow.cli import main
from parkflow.export import read_aggregate

from conftest import park_from_meters
from parkflow.ingest import write_park


@pytest.fixture
def two_park(tmp_path):
    path = tmp_path / "two.csv"
    write_park(park_from_meters([(0, 0), (100, 0)], [30, 45], popularity=[1, 9]), path)
    return path


def test_singleton_run_writes_three_files(tmp_path, capsys):
    out = tmp_path / "res"
    code = main(["run", "--gen", "5", "--budgets", "120", "--lambdas", "0.5", "--strategies", "scair", "--out", str(out)])
    assert code == 0
    assert sorted(p.name for p in out.iterdir()) == ["aggregate.csv", "cells.csv", "series.csv"]
    with open(out / "cells.csv") as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    assert len(rows) == 1 and rows[0]["strategy"] == "scair"
    assert "SCAIR" in capsys.readouterr().out


def test_missing_park_file(tmp_path, capsys):
    missing = tmp_path / "nope.csv"
    assert main(["paths", "--park", str(missing), "--budget", "60"]) == 2
    assert str(missing) in capsys.readouterr().err


def test_paths_on_two_facility_park(two_park, capsys):
    assert main(["paths", "--park", str(two_park), "--budget", "200"]) == 0
    lines = [ln for ln in capsys.readouterr().out.splitlines() if not ln.startswith("#")]
    assert lines[0] == "path_index,facilities,total_time_min"
    assert len(lines) == 2 and lines[1].startswith("0,0-1,")


def test_matrix_row_sums(tmp_path, capsys):
    out = tmp_path / "m.csv"
    assert main(["matrix", "--gen", "6", "--seed", "3", "--budget", "150", "--lambda", "0.5", "--out", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(ln.endswith("sum=1.000000") for ln in lines)
    assert out.exists()


def test_gen_park_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["gen-park", "--n", "8", "--seed", "4", "--out", str(a)]) == 0
    assert main(["gen-park", "--n", "8", "--seed", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--budgets", "60"],
        ["run", "--gen", "5", "--strategies", "greedy"],
        ["run", "--gen", "5", "--layout", "clustered"],
        ["paths", "--gen", "5"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_cap_exit_code(tmp_path):
    dense = ["--gen", "10", "--layout", "clustered", "--max-paths", "3"]
    assert main(["paths", *dense, "--budget", "400", "--out", str(tmp_path / "p.csv")]) == 3
    assert main(["run", *dense, "--budgets", "400", "--lambdas", "1", "--out", str(tmp_path)]) == 3


def test_bad_park_file_is_data_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,name\n0,x\n")
    assert main(["paths", "--park", str(bad), "--budget", "60"]) == 2
    assert "header" in capsys.readouterr().err


def test_full_default_grid_on_clustered_park(tmp_path):
    out = tmp_path / "grid"
    assert main(["run", "--gen", "10", "--layout", "clustered", "--seed", "1", "--out", str(out)]) == 0
    rows = read_aggregate(out / "aggregate.csv")
    assert len(rows) == 11 * 4 and all(r.n_cells == 19 for r in rows)
    mean = {s: sum(r.qt_ratio_mean for r in rows if r.strategy == s) / 11 for s in ("disop", "popop", "podop", "scair")}
    assert mean["scair"] < min(mean["disop"], mean["popop"], mean["podop"])
