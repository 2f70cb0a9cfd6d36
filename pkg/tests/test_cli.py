from __future__ import annotations

import json
import subprocess
import sys

import pytest

from kbideals.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ideal_triviality_query(capsys):
    code, out, _ = run(capsys, "ideal", "krebes_A", "--parity", "odd")
    assert code == 0
    assert out.splitlines() == ["odd ideal: <9, 4 + A^4>", "NON-TRIVIAL"]
    code, out, _ = run(capsys, "ideal", "tangle_D", "--parity", "odd")
    assert code == 1 and out.splitlines()[-1] == "TRIVIAL"
    code, out, _ = run(capsys, "ideal", "tangle_H", "--parity", "full")
    assert code == 1


def test_ideal_json(capsys):
    code, out, _ = run(capsys, "--json", "ideal", "tangle_D", "--parity", "even")
    data = json.loads(out)
    assert code == 0
    assert data == {"parity": "even", "ideal": ["9", "2 - A^4"], "trivial": False, "omega_contraction": 3}


def test_det_of_unknotted_closure(capsys, tmp_path):
    assert run(capsys, "det", "d_unknot_closure")[:2] == (0, "1\n")
    from kbideals.catalog import read_data

    f = tmp_path / "closure.link"
    f.write_text(read_data("d_unknot_closure.link"))
    assert run(capsys, "det", str(f))[:2] == (0, "1\n")


def test_bracket_and_reduce(capsys, tmp_path):
    f = tmp_path / "hopf.link"
    f.write_text("X 1 3 2 4\nX 3 1 4 2\n")
    code, out, _ = run(capsys, "bracket", str(f))
    assert code == 0 and out == "A^-6 + A^-2 + A^2 + A^6\n"  # Hopf link (unknot = delta)
    code, out, _ = run(capsys, "reduce", "tangle_D")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "even part:" and "odd part:" in lines


def test_coeffs(capsys):
    code, out, _ = run(capsys, "coeffs", "tangle_D")
    assert code == 0 and out.splitlines()[-1] == "c(2,3) = A^2"
    code, out, _ = run(capsys, "--json", "coeffs", "tangle_D")
    assert json.loads(out)["coefficients"]["2,3"] == "A^2"


def test_closure_output_round_trips(capsys, tmp_path):
    out_file = tmp_path / "c.link"
    code, out, _ = run(capsys, "closure", "tangle_D", "--winding", "1", "--twists", "-1", "-o", str(out_file))
    assert code == 0 and "wrote" in out
    code, out, _ = run(capsys, "det", str(out_file))
    assert code == 0 and int(out) % 1 == 0
    code, out, _ = run(capsys, "closure", "tangle_D", "--complement", "d_unknot_complement")
    f = tmp_path / "u.link"
    f.write_text(out)
    assert run(capsys, "det", str(f))[1] == "1\n"


def test_errors_are_named(capsys, tmp_path):
    code, _, err = run(capsys, "bracket", "no_such_thing")
    assert code == 2 and err.startswith("UnknownName")
    bad = tmp_path / "bad.link"
    bad.write_text("X 1 2 3 4\nZ 9\n")
    code, _, err = run(capsys, "bracket", str(bad))
    assert code == 2 and err.startswith("DiagramParseError") and "line 2" in err
    code, _, err = run(capsys, "det", "tangle_D")
    assert code == 2 and err.startswith("MalformedDiagram")
    code, _, err = run(capsys, "--max-crossings", "2", "reduce", "tangle_H")
    assert code == 2 and err.startswith("BoundExceeded")


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert all(line.startswith("[PASS]") for line in out.splitlines()[:-1])
    assert out.splitlines()[-1] == "11/11 checks passed"


def test_output_is_byte_stable(capsys):
    first = run(capsys, "--json", "verify")[1]
    second = run(capsys, "--json", "verify")[1]
    assert first == second


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "kbideals.cli", "ideal", "krebes_A", "--parity", "even"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1 and proc.stdout.splitlines()[-1] == "TRIVIAL"
