import csv
import io
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SPACE_LIST
from mpga.algebra import Multivector
from mpga.lang import ScriptError, Undefined, parse, render_value, run
from mpga.lang.cli import main

GOLDEN = Path(__file__).parent / "golden"


def cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "mpga.lang.cli", *map(str, args)],
        capture_output=True, text=True, cwd=cwd,
    )


def write(tmp_path, text, name="s.mpga"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def values(text, space="M2"):
    out = io.StringIO()
    run(text, space, out)
    return out.getvalue().splitlines()


# ------------------------------------------------------------ golden runs

def test_golden_angle_stdout_is_stable():
    expected = (GOLDEN / "angle_m2.out").read_text()
    first = cli("eval", "--space", "m2", GOLDEN / "angle_m2.mpga")
    second = cli("eval", "--space", "m2", GOLDEN / "angle_m2.mpga")
    assert first.returncode == 0, first.stderr
    assert first.stdout == expected
    assert second.stdout == first.stdout


def test_golden_angle_values():
    lines = (GOLDEN / "angle_m2.out").read_text().splitlines()
    phi_a, phi_b, phi_ab, acosh_ab, tanh_ab = map(float, lines[2:7])
    assert phi_a == pytest.approx(math.atanh(2 / 3), abs=1e-11)
    assert phi_b == pytest.approx(math.atanh(-0.5), abs=1e-11)
    assert phi_ab == pytest.approx(acosh_ab, abs=1e-11)
    assert tanh_ab == pytest.approx(7 / 8, abs=1e-11)
    assert lines[-1] == "undefined(improper)"


def test_golden_orbit_csv_is_stable(tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"orbit{k}.csv"
        r = cli("orbit", "--space", "m3", "--generator", "Omega", "--entity", "P",
                "--from", -2, "--to", 2, "--steps", 101, "--out", target, GOLDEN / "parabolic_m3.mpga")
        assert r.returncode == 0, r.stderr
        assert r.stdout == (GOLDEN / "parabolic_m3.out").read_text()
        outs.append(target.read_bytes())
    assert outs[0] == outs[1] == (GOLDEN / "parabolic_m3.csv").read_bytes()


def test_golden_orbit_matches_parabola():
    with open(GOLDEN / "parabolic_m3.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["theta", "x", "y", "t"]
    data = np.array(rows[1:], dtype=float)
    assert data.shape == (101, 4)
    th = data[:, 0]
    assert np.all(np.diff(th) > 0)
    np.testing.assert_allclose(data[:, 1], 0.75 * (2 - th**2), atol=1e-12)
    np.testing.assert_allclose(data[:, 2], 1.5 * th, atol=1e-12)
    np.testing.assert_allclose(data[:, 3], 0.75 * th**2, atol=1e-12)


# ------------------------------------------------------------ exit codes

@pytest.mark.parametrize("text,code", [
    ("a = e1 $ 2\n", "E-LEX"),
    ("print e5\n", "E-LEX"),
    ("a = (e1 + \n", "E-SYNTAX"),
    ("print foo\n", "E-NAME"),
    ("a = 1\na = 2\n", "E-NAME"),
    ("print point(1, 2, 3)\n", "E-ARITY"),
])
def test_parse_errors_exit_2(tmp_path, capsys, text, code):
    assert main(["eval", "--space", "m2", str(write(tmp_path, text))]) == 2
    err = capsys.readouterr().err
    assert code in err
    assert "s.mpga:" in err  # position prefix


def test_parse_error_positions():
    with pytest.raises(ScriptError) as info:
        parse("a = 1\nb = a +* 2\n", "M2")
    assert (info.value.line, info.value.col) == (2, 8)


def test_eval_error_exits_3(tmp_path, capsys):
    assert main(["eval", "--space", "m3", str(write(tmp_path, "print inverse(e0)\n"))]) == 3
    assert "E-EVAL" in capsys.readouterr().err


def test_io_errors_exit_4(tmp_path):
    assert main(["eval", "--space", "m2", str(tmp_path / "missing.mpga")]) == 4
    s = write(tmp_path, "A = e12\nP = point(0, 0, 0)\n")
    bad_out = tmp_path / "no_such_dir" / "o.csv"
    args = ["orbit", "--space", "m3", "--generator", "A", "--entity", "P",
            "--from", "0", "--to", "1", "--steps", "3", "--out", str(bad_out), str(s)]
    assert main(args) == 4


def test_orbit_unbound_name_exits_3(tmp_path):
    s = write(tmp_path, "A = e12\n")
    args = ["orbit", "--space", "m3", "--generator", "A", "--entity", "Q",
            "--from", "0", "--to", "1", "--steps", "3", "--out", str(tmp_path / "o.csv"), str(s)]
    assert main(args) == 3


def test_bad_flags_exit_2(tmp_path):
    s = write(tmp_path, "print 1\n")
    assert main(["eval", "--space", "m9", str(s)]) == 2
    assert main(["eval", "--space", "m2", "--tol", "-1", str(s)]) == 2


def test_success_exit_0_and_console_entry(tmp_path):
    s = write(tmp_path, "print 1 + 2\n")
    r = cli("eval", "--space", "m2", s)
    assert (r.returncode, r.stdout) == (0, "3\n")


# ------------------------------------------------------------ evaluation

def test_precedence():
    out = values("print e1 + e2 * e2\nprint e1 ^ e2 + e0\nprint (e1 + e2) & (e1 - e2)\nprint -e1 * e1\n", "M3")
    assert out[0] == "1 + e1"
    assert out[1] == "e0 + e12"
    assert out[3] == "-1"


def test_blade_index_order_is_sign_normalized():
    assert values("print e02 + e20\nprint e320 + e023\n", "M3") == ["0", "0"]


def test_rational_and_sqrt_literals():
    assert values("print 1/4 + sqrt(2)\n") == [render_value(0.25 + math.sqrt(2))]


def test_distance_to_self_and_spacelike():
    out = values("P = point(0.3, 0.2)\nQ = point(2, 1)\nprint distance(P, P)\nprint distance(P, Q)\n")
    assert out == ["0", "undefined(improper)"]


def test_undefined_value_is_a_value():
    env = run("u = distance(point(0, 0), point(2, 1))\n", "M2")
    assert isinstance(env["u"], Undefined)


def test_tolerance_flag_changes_classification(tmp_path):
    s = write(tmp_path, "print classify(e1 + 1.0000001*e2)\n")
    loose = cli("eval", "--space", "m2", "--tol", "1e-3", s)
    strict = cli("eval", "--space", "m2", s)
    assert "null" in loose.stdout
    assert "null" not in strict.stdout


def test_orbit_two_steps_over_point_interval(tmp_path):
    s = write(tmp_path, "A = -e23 + e12\nP = e123 + 1.5*e320\n")
    out = tmp_path / "o.csv"
    args = ["orbit", "--space", "m3", "--generator", "A", "--entity", "P",
            "--from", "0", "--to", "0", "--steps", "2", "--out", str(out), str(s)]
    assert main(args) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3 and lines[1] == lines[2]


def test_orbit_rejects_single_step(tmp_path):
    s = write(tmp_path, "A = e12\nP = point(1, 0, 0)\n")
    args = ["orbit", "--space", "m3", "--generator", "A", "--entity", "P",
            "--from", "0", "--to", "1", "--steps", "1", "--out", str(tmp_path / "o.csv"), str(s)]
    assert main(args) == 3


def test_elliptic_orbit_closes(tmp_path):
    s = write(tmp_path, "A = e12\nP = point(1, 0.5, 0.25)\n")
    out = tmp_path / "o.csv"
    args = ["orbit", "--space", "m3", "--generator", "A", "--entity", "P",
            "--from", "0", "--to", str(2 * math.pi), "--steps", "9", "--out", str(out), str(s)]
    assert main(args) == 0
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    np.testing.assert_allclose(data[0, 1:], data[-1, 1:], atol=1e-9)
    # a rotation about the time axis keeps the spatial radius
    np.testing.assert_allclose(np.hypot(data[:, 1], data[:, 2]), math.hypot(1, 0.5), atol=1e-12)


def test_orbit_of_line_writes_blade_columns(tmp_path):
    s = write(tmp_path, "A = e12\nL = e23\n")
    out = tmp_path / "o.csv"
    args = ["orbit", "--space", "m3", "--generator", "A", "--entity", "L",
            "--from", "0", "--to", "1", "--steps", "3", "--out", str(out), str(s)]
    assert main(args) == 0
    header = out.read_text().splitlines()[0].split(",")
    assert header[0] == "theta" and len(header) == 7


# ------------------------------------------------------------ round trip

def reparse(text, space):
    env = run(f"v = {text}\n", space)
    return env["v"]


@pytest.mark.parametrize("text", ["undefined(improper)", "(1, -2.5, 3e-07)", "-0.125", "e0 - 0.5*e12"])
def test_round_trip_literals(text):
    v = reparse(text, "M3")
    r = render_value(v)
    assert render_value(reparse(r, "M3")) == r


coef = st.floats(-1e3, 1e3, allow_nan=False).filter(lambda x: x == 0 or abs(x) > 1e-6)


@given(st.sampled_from(SPACE_LIST).flatmap(
    lambda s: st.lists(coef, min_size=s.size, max_size=s.size).map(lambda c: Multivector(s, c))))
def test_round_trip_multivectors(mv):
    r = render_value(mv)
    again = reparse(r, mv.sig.space_tag)
    assert render_value(again) == r
    np.testing.assert_allclose(again.coeffs if isinstance(again, Multivector) else again,
                               mv.coeffs if isinstance(again, Multivector) else mv.scalar_part(),
                               rtol=1e-11, atol=1e-9)
