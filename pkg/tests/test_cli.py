import json
import subprocess
import sys

import pytest

from kdelaunay.cli import (EXIT_DEGENERATE, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, format_decimal,
                           format_value, main)


@pytest.fixture
def tri_file(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text("0 0\n1 0\n0 1\n")
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_mosaic_triangle(capsys, tri_file):
    code, out, _ = run(capsys, "mosaic", "--k", 2, "-i", tri_file)
    assert code == EXIT_OK
    doc = json.loads(out)
    order2 = doc[1]
    assert order2["order"] == 2 and order2["vertices"] == [[0, 1], [0, 2], [1, 2]]
    assert order2["cells"] == [{"anchor": [], "a_on": [0, 1, 2], "generation": 2,
                                "vertex_refs": [0, 1, 2]}]


def test_mosaic_output_is_byte_identical(tmp_path):
    for name in ("a", "b"):
        assert main(["mosaic", "--sample", "unit_ball", "--n", "9", "--d", "2", "--seed", "3",
                     "--k", "4", "--out-dir", str(tmp_path / name)]) == EXIT_OK
    for k in range(1, 5):
        f = f"mosaic_k{k}.json"
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    doc = json.loads((tmp_path / "a" / "mosaic_k3.json").read_text())
    keys = [(c["generation"], c["anchor"], [doc["vertices"][r] for r in c["vertex_refs"]])
            for c in doc["cells"]]
    assert keys == sorted(keys) and doc["vertices"] == sorted(doc["vertices"])


def test_verify_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "--n", 8, "--d", 2, "--seed", 7)
    assert code == EXIT_OK and "agrees" in out


def test_verify_mismatch(capsys, monkeypatch):
    import kdelaunay.cli as cli
    monkeypatch.setattr(cli, "mosaics_equal", lambda x, y: (False, "forced"))
    code, _, _ = run(capsys, "verify", "--n", 6, "--d", 2)
    assert code == EXIT_MISMATCH


def test_alpha_inf_lists_full_mosaic(capsys, tri_file):
    code, out, _ = run(capsys, "alpha", "--k", 1, "--alpha-sq", "inf", "-i", tri_file)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["alpha_sq"] == "inf"
    assert sorted(c["dimension"] for c in doc["filtration"]) == [0, 0, 0, 1, 1, 1, 2]
    assert [c["value"] for c in doc["filtration"]] == ["0", "0", "0", "1/4", "1/4", "1/2", "1/2"]


def test_alpha_csv(capsys, tri_file):
    code, out, _ = run(capsys, "alpha", "--k", 1, "--alpha-sq", "1/4", "--format", "csv",
                       "-i", tri_file)
    lines = out.splitlines()
    assert code == EXIT_OK and lines[0].startswith("value,") and len(lines) == 6


def test_tiling(capsys, tri_file):
    code, out, _ = run(capsys, "tiling", "-i", tri_file, "--embed")
    doc = json.loads(out)
    assert code == EXIT_OK and len(doc["rhomboids"]) == 27
    full = [r for r in doc["rhomboids"] if r["a_in"] == [0, 1, 2]]
    assert full[0]["position"] == ["1", "1", "-3"]


def test_sample_writes_decimals(capsys):
    code, out, _ = run(capsys, "sample", "--sample", "moment_curve", "--n", 3, "--d", 2)
    assert code == EXIT_OK and out == "1 1\n2 4\n3 9\n"
    code, out, _ = run(capsys, "sample", "--n", 3, "--d", 2, "--seed", 1)
    assert code == EXIT_OK and all("/" not in t for t in out.split())


def test_stats(tmp_path, capsys):
    code, out, _ = run(capsys, "stats", "--n", 7, "--d", 2, "--trials", 2, "--deterministic",
                       "-o", tmp_path)
    assert code == EXIT_OK and "count_identity: 2/2" in out
    assert len(list(tmp_path.glob("unit_ball_n7_d2_*.csv"))) == 5


@pytest.mark.parametrize("text", ["1 2\n3\n", "0 0\n0 0\n", "a b\n"])
def test_bad_point_files(tmp_path, capsys, text):
    p = tmp_path / "bad.txt"
    p.write_text(text)
    code, _, err = run(capsys, "mosaic", "--k", 1, "-i", p)
    assert code == EXIT_USAGE and "error" in err


def test_degenerate_input(tmp_path, capsys):
    p = tmp_path / "square.txt"
    p.write_text("0 0\n1 0\n1 1\n0 1\n")
    code, _, err = run(capsys, "mosaic", "--k", 1, "-i", p)
    assert code == EXIT_DEGENERATE and "general position" in err
    code, _, _ = run(capsys, "mosaic", "--k", 2, "-i", p, "--perturb", "1/1000")
    assert code == EXIT_OK


@pytest.mark.parametrize("argv", [["mosaic"], ["nosuch"], ["mosaic", "--k", "1"],
                                  ["mosaic", "--k", "9", "--sample", "unit_ball", "--n", "4",
                                   "--d", "2"],
                                  ["verify", "--n", "20", "--d", "2"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == EXIT_USAGE


def test_module_entry_point(tri_file):
    proc = subprocess.run([sys.executable, "-m", "kdelaunay", "mosaic", "--k", "1", "-i",
                           str(tri_file)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)[0]["order"] == 1
    proc = subprocess.run([sys.executable, "-m", "kdelaunay", "mosaic"], capture_output=True)
    assert proc.returncode == EXIT_USAGE


def test_formatters():
    assert format_value(float("inf")) == "inf" and format_value(float("-inf")) == "-inf"
    from fractions import Fraction as F
    assert format_value(F(3, 4)) == "3/4"
    assert format_decimal(F(-5, 100)) == "-0.05"
    assert format_decimal(F(123456, 1000000)) == "0.123456"
    assert format_decimal(F(1, 3)) == "1/3" and format_decimal(F(7)) == "7"
    assert format_decimal(F(1, 8)) == "0.125"
