import json
import subprocess
import sys

import pytest

from gradekit import gallery, parse_structure, serialize_structure
from gradekit.cli import main
from gradekit.gallery import NAMES
from gradekit.grades import ALL


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in NAMES:
        p = tmp_path / f"{name}.struct"
        p.write_text(serialize_structure(gallery(name)))
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_grades_json(capsys, files):
    code, out, _ = run(capsys, "grades", files["A"], "--pair", "1,2", "--json")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"pairs"} and len(data["pairs"]) == 1
    row = data["pairs"][0]
    assert set(row) == {"a", "b", "grades"} and set(row["grades"]) == {g.value for g in ALL}
    assert row["grades"]["id"] is False and row["grades"]["indiscNeqFull"] is True


def test_grades_table(capsys, files):
    code, out, _ = run(capsys, "grades", files["C"])
    lines = out.splitlines()
    assert code == 0 and len(lines) == 1 + 9
    assert lines[0].split()[:3] == ["a", "b", "="]


def test_conform(capsys, files):
    code, out, _ = run(capsys, "conform", files["G"], "--regime", "finite-relational")
    assert code == 0 and out == "0 violations\n"


def test_lattice_dot(capsys):
    code, out, _ = run(capsys, "lattice", "--regime", "general-arbitrary", "--dot")
    assert code == 0 and out.startswith("digraph")
    assert sum(1 for line in out.splitlines() if "[label=" in line) == 12


def test_quotient(capsys, files):
    code, out, _ = run(capsys, "quotient", files["C"])
    assert code == 0 and "# [1, 3] -> 1" in out
    assert len(parse_structure(out)) == 2


def test_auto(capsys, files):
    assert run(capsys, "auto", files["D"], "--map", "1:2")[1].splitlines()[0] == "(1 2 3 4)"
    assert run(capsys, "auto", files["D"], "--map", "1:2", "--swap")[1] == "no automorphism\n"
    assert run(capsys, "auto", files["B"], "--map", "1:2", "--total")[1].startswith("(1 2)")
    assert run(capsys, "auto", files["C"], "--map", "1:3", "--total")[1].startswith("(1 3)")


def test_rel(capsys, files):
    code, out, _ = run(capsys, "rel", files["C"], "--grade", "total", "--pair", "1,2")
    assert code == 0 and out.startswith("~ₜ(1,2): yes") and "witness:" in out
    assert "no" in run(capsys, "rel", files["D"], "--grade", "total", "--pair", "1,3")[1]


def test_galois(capsys, files):
    code, out, _ = run(capsys, "galois", files["C"], "--check")
    assert code == 0 and out.endswith("0 law(s) failed\n")


def test_indisc(capsys, files):
    code, out, _ = run(capsys, "indisc", files["B"], "--grade", "indiscNeqFull", "--pair", "1,2")
    assert code == 0 and "no" in out and "discerned by: !R(x,y)" in out
    assert "yes" in run(capsys, "indisc", files["G"], "--grade", "≈ₚ", "--pair", "1,2")[1]


@pytest.mark.parametrize("grade", ["sym-total", "rel-total", "indisc-full"])
def test_capture(capsys, files, grade):
    code, out, _ = run(capsys, "capture", files["D"], "--grade", grade)
    assert code == 0 and "on this structure: yes" in out


def test_inflate_and_reread(capsys, files, tmp_path):
    code, out, _ = run(capsys, "inflate", files["B"], "--element", "1", "--copies", "2")
    assert code == 0
    path = tmp_path / "Bi.struct"
    path.write_text(out)
    assert run(capsys, "quotient", str(path))[0] == 1
    assert run(capsys, "quotient", str(path), "--allow-clones")[0] == 0


def test_gallery_and_random(capsys, tmp_path):
    assert parse_structure(run(capsys, "gallery", "G")[1]) == gallery("G")
    spec = tmp_path / "spec.sig"
    spec.write_text("signature { pred R/2; func f/1; }\ndensity { R = 0.3; }\n")
    first = run(capsys, "random", "--seed", "5", "--size", "4", "--spec", str(spec))[1]
    second = run(capsys, "random", "--seed", "5", "--size", "4", "--spec", str(spec))[1]
    assert first == second and len(parse_structure(first)) == 4


def test_output_file(capsys, files, tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = run(capsys, "-o", str(target), "conform", files["D"], "--regime", "finite-arbitrary")
    assert code == 0 and out == "" and target.read_text() == "0 violations\n"


def test_deterministic(capsys, files):
    outs = {run(capsys, "grades", files["I"])[1] for _ in range(2)}
    assert len(outs) == 1


def test_domain_errors_exit_1(capsys, files, tmp_path):
    code, _, err = run(capsys, "conform", files["F"], "--regime", "finite-relational")
    assert code == 1 and "[grade-lattice]" in err
    bad = tmp_path / "bad.struct"
    bad.write_text("signature { pred R/2; } structure { domain = { 1 }; R = { (1,2) }; }")
    code, _, err = run(capsys, "grades", str(bad))
    assert code == 1 and "[model-core]" in err
    code, _, err = run(capsys, "grades", files["I"], "--cap", "5")
    assert code == 1 and "[grade-lattice]" in err
    code, _, err = run(capsys, "inflate", files["B"], "--element", "1", "--copies", "0")
    assert code == 1 and "[extensions]" in err


def test_usage_errors_exit_2(capsys, files):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["grades", files["A"], "--bogus"])
    assert info.value.code == 2
    assert run(capsys, "rel", files["C"], "--grade", "total", "--pair", "1")[0] == 2
    assert run(capsys, "rel", files["C"], "--grade", "total", "--pair", "1,9")[0] == 2


def test_console_script_entry(files):
    proc = subprocess.run([sys.executable, "-m", "gradekit.cli", "conform", files["G"],
                           "--regime", "finite-relational"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "0 violations\n"
