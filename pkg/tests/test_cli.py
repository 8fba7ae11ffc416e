import csv
import io
import json
import subprocess
import sys

import pytest

from pdxcorr.cli import OUTPUT_DIR_ENV, main

M6_GOLDEN = (
    '{"m": 6, "d": 3, "values": [{"c": -17, "count": 1}, '
    '{"c": -1, "count": 3}, {"c": 7, "count": 3}]}\n'
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_field_info(capsys):
    code, out, _ = run(capsys, "field-info", "--m", "6", "--format", "json")
    info = json.loads(out)
    assert code == 0
    assert (info["T"], info["alpha_order"], info["beta_order"]) == (9, 63, 7)
    assert info["poly"] == "0x43"


def test_field_info_table(capsys):
    code, out, _ = run(capsys, "field-info", "--m", "6")
    assert code == 0 and "beta_order  7" in out


def test_field_info_odd(capsys):
    code, _, err = run(capsys, "field-info", "--m", "7")
    assert code == 2 and "OddDegree" in err


def test_field_info_poly_override(capsys):
    code, out, _ = run(capsys, "field-info", "--m", "6", "--poly", "0x5b", "--format", "json")
    assert code == 0 and json.loads(out)["poly"] == "0x5b"
    code, _, err = run(capsys, "field-info", "--m", "6", "--poly", "0x49")
    assert code == 2 and "NotPrimitive" in err


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["spectrum", "--m", "6"]) == 2
    assert main(["field-info", "--m", "6", "--poly", "zz"]) == 2
    capsys.readouterr()


def test_spectrum_golden(capsys):
    code, out, _ = run(capsys, "spectrum", "--m", "6", "--d", "3")
    assert code == 0 and out == M6_GOLDEN


def test_spectrum_not_coprime(capsys):
    code, _, err = run(capsys, "spectrum", "--m", "6", "--d", "7")
    assert code == 2 and "DNotCoprime" in err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["d"] for r in rows] == ["3", "5", "6"]
    code, out, _ = run(capsys, "enumerate", "--m", "8")
    assert out == "n,d,coset_leader,l,i,k,r,s\n"


def test_rank_census(capsys):
    code, out, _ = run(capsys, "rank-census", "--m", "12", "--l", "4")
    assert code == 0
    assert json.loads(out)["ranks"] == {"12": 47, "8": 16}
    # l = 2 normalizes to n - l = 4
    code, out2, _ = run(capsys, "rank-census", "--m", "12", "--l", "2")
    assert out2 == out


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--m", "12", "--d", "26")
    rep = json.loads(out)
    assert code == 0 and rep["pass"] is True
    assert rep["rank_census"] == {"12": 47, "8": 16}
    assert set(rep) >= {"m", "d", "pass", "empirical", "predicted", "rank_census"}


def test_verify_fail_exit_code(capsys, monkeypatch):
    from dataclasses import replace

    from pdxcorr import analysis

    real = analysis.theorem1_prediction
    monkeypatch.setattr(
        analysis,
        "theorem1_prediction",
        lambda n, k: replace(real(n, k), rows=((-1, 0),) + real(n, k).rows[1:]),
    )
    code, out, _ = run(capsys, "verify", "--m", "12", "--d", "26", "--format", "table")
    assert code == 1 and "FAIL" in out


def test_verify_unmatched_d(capsys):
    code, _, err = run(capsys, "verify", "--m", "8", "--d", "7")
    assert code == 2 and "solves no congruence" in err


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--m", "16", "--max-values", "4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert all(r["l"] == "" and r["k"] == "" for r in rows)
    code, _, err = run(capsys, "search", "--m", "18")
    assert code == 2 and "MTooLarge" in err
    code, out, _ = run(capsys, "search", "--m", "18", "--allow-large", "--format", "json")
    assert code == 0 and isinstance(json.loads(out), list)


def test_deterministic_output(capsys):
    outs = set()
    for threads in ("1", "3"):
        _, out, _ = run(capsys, "search", "--m", "12", "--max-values", "6", "--threads", threads)
        outs.add(out)
    assert len(outs) == 1


def test_output_file_and_env(tmp_path, monkeypatch, capsys):
    target = tmp_path / "a.json"
    assert main(["spectrum", "--m", "6", "--d", "3", "-o", str(target)]) == 0
    assert target.read_text() == M6_GOLDEN
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "outdir"))
    assert main(["spectrum", "--m", "6", "--d", "3", "-o", "b.json"]) == 0
    assert (tmp_path / "outdir" / "b.json").read_text() == M6_GOLDEN
    assert capsys.readouterr().out == ""


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pdxcorr", "spectrum", "--m", "6", "--d", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == M6_GOLDEN


@pytest.mark.parametrize("fmt", ["table"])
def test_table_formats(capsys, fmt):
    for argv in (
        ["spectrum", "--m", "6", "--d", "3"],
        ["rank-census", "--m", "6", "--l", "2"],
        ["search", "--m", "8"],
    ):
        code, out, _ = run(capsys, *argv, "--format", fmt)
        assert code == 0 and out.strip()
