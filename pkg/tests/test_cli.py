import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from genus_dp.cli import main
from genus_dp.formats import write_emb
from genus_dp.generators import clique, k5_torus


@pytest.fixture
def k4(tmp_path):
    path = tmp_path / "k4.emb"
    write_emb(clique(4), path)
    return path


@pytest.fixture
def k5(tmp_path):
    path = tmp_path / "k5.emb"
    write_emb(k5_torus(), path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_info(capsys, k4, k5):
    code, out, _ = run(capsys, "info", k4)
    assert code == 0 and json.loads(out)["euler_genus"] == 0
    code, out, _ = run(capsys, "info", k5)
    assert code == 0 and json.loads(out)["euler_genus"] == 2


def test_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.emb"
    bad.write_text("emb 2 1\nv 0: 0\nv 1: 0\ne 0 0 1 ?\n")
    code, out, err = run(capsys, "info", bad)
    assert code == 2 and out == "" and "line 4" in err
    code, _, err = run(capsys, "info", tmp_path / "nope.emb")
    assert code == 2 and "cannot read" in err


def test_poly(capsys, k4):
    code, out, _ = run(capsys, "poly", k4)
    data = json.loads(out)
    assert code == 0 and len(data["components"]) == 1 and data["apices"] == []


def test_scd_report_file(capsys, k4, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "scd", k4, "--exact-bw-limit", 12, "--report", report)
    assert code == 0 and out == ""
    data = json.loads(report.read_text())
    assert data["verification"]["passed"] and data["k_used"] == 3
    assert {"mid", "mid_minus_apices", "nooses", "theta", "passed"} <= set(data["verification"]["edges"][0])
    assert data["stages"][0]["branch_width"] == 3


def test_scd_is_reproducible(capsys, k5):
    first = run(capsys, "scd", k5)[1]
    assert run(capsys, "scd", k5)[1] == first


def test_verify_thresholds(capsys, k5):
    code, out, _ = run(capsys, "verify", k5)
    assert code == 0 and json.loads(out)["passed"]
    with pytest.raises(SystemExit) as info:
        main(["verify", str(k5), "--max-nooses", "0"])
    assert info.value.code == 2 and "positive" in capsys.readouterr().err


def test_verify_failure_exit(capsys, tmp_path):
    from conftest import pipeline

    name, g, scd, report = max(pipeline("toroidal"), key=lambda t: t[3].max_nooses)
    path = tmp_path / "t.emb"
    write_emb(g, path)
    code, out, _ = run(capsys, "verify", path, "--max-nooses", 1)
    assert code == 1 and not json.loads(out)["passed"]


@pytest.mark.parametrize("decomp", ["scd", "exact", "heuristic"])
def test_solve(capsys, k4, tmp_path, decomp):
    stats = tmp_path / "s.json"
    code, out, _ = run(capsys, "solve", "--problem", "vc", "--budget", 3, "--decomp", decomp, "--stats", stats, k4)
    data = json.loads(out)
    assert code == 0 and data["answer"] is True and data["optimum"] == 3 and len(data["witness"]) == 3
    assert json.loads(stats.read_text())["problem"] == "vc"
    code, out, _ = run(capsys, "solve", "--problem", "cvc", "--budget", 2, "--decomp", decomp, k4)
    data = json.loads(out)
    assert data["answer"] is False and data["witness"] is None


def test_solve_with_decomposition_file(capsys, k4, tmp_path):
    report = tmp_path / "r.json"
    run(capsys, "scd", k4, "-o", report)
    code, out, _ = run(capsys, "solve", "--problem", "cvc", "--budget", 3, "--decomp-file", report, k4)
    assert code == 0 and json.loads(out)["answer"] is True
    code, _, err = run(capsys, "solve", "--problem", "vc", "--budget", 3, "--decomp-file", tmp_path / "x.json", k4)
    assert code == 2


def test_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "grid", 3)
    assert code == 0 and out.startswith("emb 9 ")
    path = tmp_path / "t.emb"
    run(capsys, "gen", "toroidal-grid", 4, "-o", path)
    code, out, _ = run(capsys, "info", path)
    assert json.loads(out)["euler_genus"] == 2
    code, out, _ = run(capsys, "gen", "cycle", 5)
    assert out.startswith("emb 5 5")
    code, _, err = run(capsys, "gen", "hexagon")
    assert code == 2 and "unknown family" in err


def test_bench(capsys, tmp_path):
    d = tmp_path / "corpus"
    assert run(capsys, "gen", "toroidal", "--corpus", "-o", d)[0] == 0
    code, out, _ = run(capsys, "bench", d)
    rows = json.loads(out)["instances"]
    assert code == 0 and rows and all(r["error"] is None for r in rows)
    assert max(r["max_nooses"] for r in rows) <= 3
    assert all("wall_time" not in r for r in rows)
    assert run(capsys, "bench", d)[1] == out
    code, out, _ = run(capsys, "bench", d, "--format", "csv", "--timings", "--threads", 2)
    table = list(csv.DictReader(io.StringIO(out)))
    assert len(table) == len(rows) and "wall_time" in table[0]


def test_bench_planar_single_noose(capsys, tmp_path):
    d = tmp_path / "planar"
    run(capsys, "gen", "planar", "--corpus", "-o", d)
    rows = json.loads(run(capsys, "bench", d)[1])["instances"]
    assert all(r["verified"] and r["max_nooses"] <= 1 for r in rows)


def test_bench_empty_and_bad_entries(capsys, tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    code, out, _ = run(capsys, "bench", empty)
    assert code == 0 and json.loads(out) == {"instances": []}
    (empty / "bad.emb").write_text("nonsense\n")
    write_emb(clique(4), empty / "good.emb")
    rows = json.loads(run(capsys, "bench", empty)[1])["instances"]
    assert [r["error"] is None for r in rows] == [False, True]


def test_console_script(k4):
    exe = shutil.which("genus-dp")
    cmd = [exe] if exe else [sys.executable, "-m", "genus_dp.cli"]
    res = subprocess.run(cmd + ["info", str(k4)], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["faces"] == 4
