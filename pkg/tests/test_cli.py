import json

import numpy as np
import pytest

from cpdunique import catalog, io
from cpdunique.cli import main


def write_triple(tmp_path, F, prefix="f"):
    paths = []
    for role, M in zip("ABC", F):
        p = tmp_path / f"{prefix}_{role}.txt"
        io.write_matrix(p, M, role)
        paths.append(str(p))
    return paths


def test_check_kruskal_exits_zero(tmp_path, capsys):
    out = tmp_path / "cert.json"
    paths = write_triple(tmp_path, catalog.three_term())
    before = [open(p).read() for p in paths]
    assert main(["check", *paths, "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "fired: kruskal" in text and "conclusion: unique" in text
    doc = json.loads(out.read_text())
    assert doc["version"] == io.CERTIFICATE_VERSION
    assert "kruskal" in doc["certificate"]["fired"]
    assert [open(p).read() for p in paths] == before  # inputs untouched


def test_check_two_of_three(tmp_path, capsys):
    assert main(["check", *write_triple(tmp_path, catalog.two_of_three())]) == 0
    assert "two_of_three_U" in capsys.readouterr().out


def test_exit_codes_for_other_tiers(tmp_path):
    assert main(["check", *write_triple(tmp_path, catalog.w_fails(1))]) == 3
    A = np.array([[1, 1, 0], [0, 0, 1]])
    B = np.array([[1, 0, 1], [0, 1, 1]])
    C = np.array([[1, 0, 2], [0, 1, 1]])
    assert main(["check", *write_triple(tmp_path, (A, B, C), "n")]) == 4


def test_mismatched_columns_is_input_error(tmp_path, capsys):
    a, b, c = write_triple(tmp_path, catalog.three_term())
    other = write_triple(tmp_path, catalog.two_of_three(), "o")
    assert main(["check", a, other[1], c]) == 1
    assert "columns" in capsys.readouterr().err


def test_parse_error_is_reported_with_position(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("rows: 1\ncols: 2\n1 z\n")
    assert main(["check", str(bad), str(bad), str(bad)]) == 1
    assert "bad.txt:3:3" in capsys.readouterr().err


def test_exact_mode_rejects_decimals(tmp_path):
    paths = write_triple(tmp_path, tuple(M.astype(float) for M in catalog.three_term()))
    assert main(["check", *paths, "--mode", "exact"]) == 1
    assert main(["check", *paths]) == 0


def test_check_sfs(tmp_path, capsys):
    A, E = catalog.identity_slab(3, 4)
    pa, pe = tmp_path / "a.txt", tmp_path / "e.txt"
    io.write_matrix(pa, A)
    io.write_matrix(pe, E)
    code = main(["check-sfs", str(pa), str(pe)])
    assert code == 4
    assert "symmetric frontal slices" in capsys.readouterr().out


def test_generic_commands(capsys):
    assert main(["generic", "--dims", "4", "4", "7", "--max-rank"]) == 0
    assert "every R <= 7" in capsys.readouterr().out
    assert main(["generic", "--dims", "4", "4", "8", "--rank", "9"]) == 3
    assert "no witness found" in capsys.readouterr().out
    assert main(["generic", "--dims", "6", "6", "11", "--rank", "12"]) == 0
    assert "m=3" in capsys.readouterr().out


def test_generic_guard(capsys):
    assert main(["generic", "--dims", "9", "9", "17", "--rank", "20", "--mode", "exact"]) == 1
    assert "exact guard" in capsys.readouterr().err


def test_tables_csv(tmp_path):
    out = tmp_path / "t2.csv"
    assert main(["tables", "--which", "2", "--range", "I=4..5", "--out", "csv", "--file", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "I,J,K,R,verdict,condition,mode,seed"
    assert [line.split(",")[3] for line in lines[1:]] == ["7", "9"]


def test_tables_bad_range(capsys):
    assert main(["tables", "--which", "3", "--range", "J=2"]) == 1


def test_examples_suite(capsys):
    assert main(["examples"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_examples_negative_control(capsys):
    assert main(["examples", "--only", "sharpness", "--tamper"]) != 0
    assert "FAIL" in capsys.readouterr().out


def test_examples_second_alpha():
    assert main(["examples", "--only", "w_fails", "--alpha", "2"]) == 0
    assert main(["examples", "--only", "w_fails", "--alpha", "0"]) == 1


def test_usage_error():
    assert main(["check"]) == 1
