import csv

import pytest

from dicut_stream.cli import EXIT_FORMAT, EXIT_OK, EXIT_PARAM, main


def _report(path):
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


@pytest.fixture
def planted(tmp_path):
    path = tmp_path / "p.txt"
    assert main(["gen", "planted-dicut", "--n", "60", "--m", "300", "--seed", "1", "--out", str(path)]) == EXIT_OK
    return path


def test_gen_writes_planted_meta(planted):
    lines = planted.read_text().splitlines()
    assert any(line.startswith("# planted_crossing=") for line in lines)


def test_gen_layered_writes_coloring(tmp_path):
    path = tmp_path / "l.txt"
    assert main(["gen", "layered-dag", "--n", "12", "--m", "20", "--out", str(path)]) == EXIT_OK
    assert len((tmp_path / "l.txt.colors").read_text().split()) == 12


def test_single_edge_compare_agrees(tmp_path):
    g = tmp_path / "e.txt"
    g.write_text("2 1\n0 1\n")
    c = tmp_path / "c.txt"
    c.write_text("1\n2\n")
    out = tmp_path / "r.txt"
    rc = main(["run", str(g), "--mode", "compare", "--coloring", str(c), "--skip-preprocess=color", "--out", str(out)])
    assert rc == EXIT_OK
    rep = _report(out)
    assert float(rep["cut_val"]) == float(rep["offline_cut_value"]) == float(rep["exact_maxval"]) == 1.0


def test_run_is_byte_identical(planted, tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.txt"
        args = ["run", str(planted), "--seed", "7", "--vertex-prob", "0.5", "--keep-prob", "0.8", "--flip-prob", "0.1"]
        assert main(args + ["--out", str(out)]) == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    rep = _report(tmp_path / "r0.txt")
    for key in ("cut_val", "rescaled_estimate", "W_size", "B_size", "C_size", "fail_fraction", "peak_tracked_bytes",
                "seed", "params.k", "edges_kept", "edges_flipped", "edges_dropped_by_coloring"):
        assert key in rep
    assert "wall_time_s" not in rep


def test_params_file_and_overrides(planted, tmp_path):
    pfile = tmp_path / "params.txt"
    pfile.write_text("k=2\nalpha=0.1\nd=3\n")
    out = tmp_path / "r.txt"
    assert main(["run", str(planted), "--params", str(pfile), "--d", "2", "--thresholds", "inf,4", "--out", str(out)]) == 0
    rep = _report(out)
    assert rep["params.k"] == "2" and rep["params.d"] == "2" and rep["params.thresholds"] == "inf,4.0"


def test_offline_mode_writes_assignment(planted, tmp_path):
    out, a = tmp_path / "r.txt", tmp_path / "a.txt"
    assert main(["run", str(planted), "--mode", "offline", "--out", str(out), "--assignment-out", str(a)]) == 0
    assert len(a.read_text().split()) == 60
    assert "cut_val" not in _report(out)


def test_exit_codes(planted, tmp_path, capsys):
    assert main(["run", str(planted), "--mode", "exact"]) == EXIT_PARAM
    assert main(["run", str(planted), "--alpha", "0.9"]) == EXIT_PARAM
    assert main(["run", str(planted), "--keep-prob", "0"]) == EXIT_PARAM
    assert main(["run", str(planted), "--skip-preprocess=color"]) == EXIT_PARAM
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1\n")
    assert main(["run", str(bad)]) == EXIT_FORMAT
    assert "line" in capsys.readouterr().err


def test_bench_csv(planted, tmp_path):
    out = tmp_path / "b.csv"
    rc = main(["bench", str(planted), "--grid", "d=1,2", "--grid", "eval_size=50", "--trials", "2", "--out", str(out)])
    assert rc == EXIT_OK
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4
    assert set(rows[0]) == {"d", "eval_reservoir_size", "trial", "seed", "cut_val", "error_vs_offline", "peak_tracked_bytes"}
    assert main(["bench", "--gen", "uniform-random:30:100:1", "--trials", "2", "--timing", "--out", str(out)]) == 0
    assert "time_s" in out.read_text().splitlines()[0]
    assert main(["bench", str(planted), "--grid", "bogus=1"]) == EXIT_PARAM
