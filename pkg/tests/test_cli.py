import subprocess
import sys

import pytest

from ctr.cli import main

from _util import example1_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_build_and_query(tmp_path, capsys):
    idx = tmp_path / "ex1.ctr"
    code, out, _ = run(capsys, "build", "--input", example1_path(), "--output", idx, "--time-struct", "wm")
    assert code == 0
    assert "z=6 n=28 sigma_s=10 sigma_t=16" in out
    queries = tmp_path / "q.txt"
    queries.write_text("# example\nstarts-with-x 1\ntop-k 2 bin\ntrips-t 0 15\n")
    code, out, _ = run(capsys, "query", "--index", idx, "--file", queries)
    assert code == 0
    assert out.splitlines() == ["2", "3:5 2:4", "6 6.000000"]


def test_query_error_line(tmp_path, capsys):
    idx = tmp_path / "ex1.ctr"
    run(capsys, "build", "--input", example1_path(), "--output", idx)
    queries = tmp_path / "q.txt"
    queries.write_text("uses-x 3\nuses-t 9 2\nuses-x 2\n")
    code, out, err = run(capsys, "query", "--index", idx, "--file", queries)
    assert code == 1
    assert out.splitlines() == ["5", "4"]
    assert "uses-t 9 2" in err


def test_generate_then_verify(tmp_path, capsys):
    trips = tmp_path / "trips.txt"
    code, _, _ = run(capsys, "generate", "--count", 300, "--dist", "very-skewed", "--seed", 3, "--output", trips)
    assert code == 0
    assert len(trips.read_text().splitlines()) == 300
    code, out, _ = run(capsys, "verify", "--input", trips, "--queries", 20, "--mode", "cyclic-day",
                       "--interval", 15, "--bitvector", "rrr32", "--seed", 1)
    assert code == 0
    assert out.strip().endswith("0 mismatches: PASS")


def test_generate_seed_from_env(monkeypatch, capsys):
    monkeypatch.setenv("CTR_SEED", "9")
    _, a, _ = run(capsys, "generate", "--count", 5)
    _, b, _ = run(capsys, "generate", "--count", 5, "--seed", 9)
    assert a == b and len(a.splitlines()) == 5


def test_verify_saved_index(tmp_path, capsys):
    idx = tmp_path / "ex1.ctr"
    run(capsys, "build", "--input", example1_path(), "--output", idx, "--psi-sample", 128)
    code, out, _ = run(capsys, "verify", "--input", example1_path(), "--index", idx, "--queries", 30)
    assert code == 0 and "PASS" in out


def test_bench_csv(tmp_path, capsys):
    trips = tmp_path / "trips.txt"
    run(capsys, "generate", "--count", 400, "--seed", 2, "--output", trips)
    out_csv = tmp_path / "bench.csv"
    code, _, err = run(capsys, "bench", "--input", trips, "--queries", 150, "--topk-runs", 2,
                       "--output", out_csv, "--mode", "cyclic-week")
    assert code == 0 and "spatial" in err
    header, row = out_csv.read_text().splitlines()
    assert header.startswith("time_struct,bitvector,t_psi")
    assert "uses_x_us" in header and row.startswith("wtht,plain,32")


def test_data_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1:5 2:3\n")
    code, _, err = run(capsys, "build", "--input", bad, "--output", tmp_path / "x.ctr")
    assert code == 1 and "line 1" in err
    corrupt = tmp_path / "corrupt.ctr"
    corrupt.write_bytes(b"CTR1" + b"\0" * 30)
    code, _, _ = run(capsys, "query", "--index", corrupt)
    assert code == 1
    code, _, _ = run(capsys, "build", "--input", tmp_path / "missing.txt", "--output", tmp_path / "y.ctr")
    assert code == 1


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["build", "--input", "x"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["bench", "--input", "x", "--psi-sample", "64"])
    assert info.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ctr", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "verify" in res.stdout
