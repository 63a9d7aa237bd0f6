import csv
import math
import statistics
import subprocess
import sys

import pytest

from thop.cli import group_of, main
from thop.model import read_instance

from .conftest import FIXTURES

FIG1 = str(FIXTURES / "fourcity.thop")
BENCH = FIXTURES / "bench"


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_group_of():
    assert group_of("eil51_01_bsc_01_01") == "eil51_01_bsc"
    assert group_of("pr107_10_usw_10_03") == "pr107_10_usw"
    assert group_of("fourcity") == "fourcity"


def test_validate_feasible(tmp_path, capsys):
    sol = tmp_path / "s.sol"
    sol.write_text("[3]\n[3]\n")
    assert main(["validate", FIG1, str(sol)]) == 0
    assert capsys.readouterr().out.strip() == "profit 100 weight 3 time 56 feasible"


def test_validate_overtime(tmp_path, capsys):
    sol = tmp_path / "s.sol"
    sol.write_text("[3 2]\n[1 4]\n")
    assert main(["validate", FIG1, str(sol)]) == 1
    out = capsys.readouterr().out
    assert "infeasible: overtime (77.43 > 75)" in out


def test_validate_malformed_tour(tmp_path, capsys):
    sol = tmp_path / "s.sol"
    sol.write_text("[]\n[1]\n")
    assert main(["validate", FIG1, str(sol)]) == 1
    assert capsys.readouterr().out.strip() == "malformed-tour: item 1 at unvisited city 2"


def test_validate_bad_file(tmp_path, capsys):
    sol = tmp_path / "s.sol"
    sol.write_text("[3 x]\n[3]\n")
    assert main(["validate", FIG1, str(sol)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_solve_writes_outputs_that_validate(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["solve", FIG1, "--runs", "3", "--iterations", "3", "--out", str(out)]) == 0
    summary = read_csv(out / "fourcity.summary.csv")
    assert len(summary) == 1 and summary[0]["best_profit"] == "100"
    runs = read_csv(out / "fourcity.runs.csv")
    assert [r["seed"] for r in runs] == ["0", "1", "2"]
    for k in (1, 2, 3):
        assert main(["validate", FIG1, str(out / f"fourcity.run{k:02d}.sol")]) == 0


def test_solve_default_ten_runs(tmp_path):
    out = tmp_path / "out"
    assert main(["solve", FIG1, "--iterations", "2", "--out", str(out)]) == 0
    summary = read_csv(out / "fourcity.summary.csv")[0]
    assert summary["runs"] == "10" and summary["best_profit"] == "100"


def test_solve_param_override_echoed(tmp_path):
    out = tmp_path / "out"
    assert main(["solve", FIG1, "--runs", "1", "--iterations", "2", "--ptries", "5", "--ants", "7",
                 "--out", str(out)]) == 0
    header = (out / "fourcity.run01.stats.csv").read_text().splitlines()[0]
    assert header.startswith("# instance=fourcity ")
    assert " ptries=5 " in header and " ants=7 " in header
    rows = read_csv_skip_comment(out / "fourcity.run01.stats.csv")
    assert list(rows[0]) == ["iteration", "elapsed_seconds", "iter_best_profit", "global_best_profit",
                             "tau_min", "tau_max"]
    assert len(rows) == 2


def read_csv_skip_comment(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def test_solve_wall_clock_stats_have_elapsed(tmp_path):
    out = tmp_path / "out"
    assert main(["solve", FIG1, "--runs", "1", "--budget-seconds", "0.2", "--out", str(out)]) == 0
    rows = read_csv_skip_comment(out / "fourcity.run01.stats.csv")
    elapsed = [float(r["elapsed_seconds"]) for r in rows]
    assert elapsed == sorted(elapsed) and elapsed[-1] >= 0.2


def test_solve_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    small8 = str(FIXTURES / "small8.thop")
    for out in (a, b):
        assert main(["solve", small8, "--runs", "1", "--seed", "4", "--iterations", "20", "--out", str(out)]) == 0
    for name in ("small8.run01.sol", "small8.run01.stats.csv", "small8.runs.csv", "small8.summary.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_solve_bad_instance(tmp_path, capsys):
    bad = tmp_path / "bad.thop"
    bad.write_text("DIMENSION: 3\n")
    assert main(["solve", str(bad), "--out", str(tmp_path)]) == 2
    assert "missing header" in capsys.readouterr().err


def test_solve_group_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"fig_01_unc": {"ants": 3, "ptries": 2}}')
    out = tmp_path / "out"
    path = str(BENCH / "fig_01_unc_01_01.thop")
    assert main(["solve", path, "--runs", "1", "--iterations", "2", "--config", str(cfg), "--out", str(out)]) == 0
    header = (out / "fig_01_unc_01_01.run01.stats.csv").read_text().splitlines()[0]
    assert " ants=3 " in header and " ptries=2 " in header


def test_bench_ratios_and_groups(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", str(BENCH / "*.thop"), "--reference", str(BENCH / "reference.csv"),
                 "--out", str(out), "--runs", "3", "--iterations", "3"]) == 0
    rows = {r["instance"]: r for r in read_csv(out)}
    assert set(rows) == {"fig_01_unc_01_01", "fig_01_unc_01_02", "tri_01_bsc_01_01", "tri_01_bsc_05_01"}
    ratios = {k: float(r["approx_ratio"]) for k, r in rows.items()}
    assert ratios == {"fig_01_unc_01_01": 1.0, "fig_01_unc_01_02": 0.8,
                      "tri_01_bsc_01_01": 1.0, "tri_01_bsc_05_01": 0.5}
    groups = {r["group"]: r for r in read_csv(tmp_path / "bench_groups.csv")}
    assert float(groups["fig_01_unc"]["mean_ratio"]) == 0.9
    assert float(groups["fig_01_unc"]["std_ratio"]) == pytest.approx(0.1 * math.sqrt(2), rel=1e-12)
    assert float(groups["tri_01_bsc"]["mean_ratio"]) == 0.75
    assert float(groups["tri_01_bsc"]["std_ratio"]) == pytest.approx(statistics.stdev([1.0, 0.5]), rel=1e-12)
    for r in rows.values():
        assert float(r["pct_time"]) <= 100 and float(r["pct_weight"]) <= 100


def test_bench_without_reference(tmp_path):
    out = tmp_path / "b.csv"
    paths = str(BENCH / "tri_*.thop")
    assert main(["bench", paths, "--out", str(out), "--runs", "2", "--iterations", "2"]) == 0
    rows = read_csv(out)
    assert len(rows) == 2
    assert all(r["approx_ratio"] == "" for r in rows)


def test_bench_reference_does_not_change_profits(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    glob_ = str(BENCH / "*.thop")
    main(["bench", glob_, "--out", str(a), "--runs", "2", "--iterations", "3"])
    main(["bench", glob_, "--out", str(b), "--runs", "2", "--iterations", "3",
          "--reference", str(BENCH / "reference.csv")])
    assert [r["profits"] for r in read_csv(a)] == [r["profits"] for r in read_csv(b)]


def test_bench_records_failures_and_continues(tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    (src / "ok_01_unc_01_01.thop").write_text((BENCH / "tri_01_bsc_01_01.thop").read_text())
    (src / "bad_01_unc_01_01.thop").write_text("garbage\n")
    out = tmp_path / "b.csv"
    assert main(["bench", str(src / "*.thop"), "--out", str(out), "--runs", "1", "--iterations", "1"]) == 0
    rows = {r["instance"]: r for r in read_csv(out)}
    assert rows["bad_01_unc_01_01"]["error"].startswith("InstanceError")
    assert rows["ok_01_unc_01_01"]["best_profit"] == "50"


def test_bench_parallel_jobs_match_serial(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    glob_ = str(BENCH / "*.thop")
    main(["bench", glob_, "--out", str(a), "--runs", "2", "--iterations", "2"])
    main(["bench", glob_, "--out", str(b), "--runs", "2", "--iterations", "2", "--jobs", "2"])
    assert [r["profits"] for r in read_csv(a)] == [r["profits"] for r in read_csv(b)]


def test_gen_two_city(tmp_path):
    out = tmp_path / "g.thop"
    assert main(["gen", "--cities", "2", "--items-per-city", "0", "--out", str(out)]) == 0
    inst = read_instance(out)
    assert (inst.n, inst.m) == (2, 0)


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.thop", tmp_path / "b.thop"
    for p in (a, b):
        assert main(["gen", "--cities", "7", "--items-per-city", "2", "--seed", "13", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("seed", range(100))
def test_gen_always_parses(tmp_path, seed):
    out = tmp_path / "g.thop"
    kind = ("unc", "bsc", "usw")[seed % 3]
    assert main(["gen", "--cities", str(2 + seed % 9), "--items-per-city", str(seed % 4), "--kind", kind,
                 "--seed", str(seed), "--out", str(out)]) == 0
    inst = read_instance(out)
    assert all(2 <= it.city <= inst.n - 1 for it in inst.items)


def test_gen_invalid_range(capsys):
    assert main(["gen", "--profit-range", "5", "1"]) == 2
    assert "profit range" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    sol = tmp_path / "s.sol"
    sol.write_text("[3]\n[3]\n")
    proc = subprocess.run([sys.executable, "-m", "thop", "validate", FIG1, str(sol)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "feasible" in proc.stdout
