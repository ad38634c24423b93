"""``mpga`` command line: evaluate scripts and write orbit samples as CSV.

Exit codes: 0 success, 2 parse error, 3 evaluation error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys

from .. import entities as ent
from .. import motions as mot
from ..algebra import Multivector
from ..config import tolerance
from ..notation import blade_names
from .evaluator import EvalError, evaluate
from .syntax import ScriptError, parse

EXIT_OK, EXIT_PARSE, EXIT_EVAL, EXIT_IO = 0, 2, 3, 4

_COORD_NAMES = {"M2": ["x", "t"], "M3": ["x", "y", "t"], "M4": ["x", "y", "z", "t"]}


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _csv_num(v: float) -> str:
    s = f"{v:.17g}"
    return "0" if s == "-0" else s


def orbit_rows(axis: Multivector, x: Multivector, theta_from: float, theta_to: float, steps: int):
    """Header and rows for an orbit; points give coordinates, other entities
    their normalised blade coefficients."""
    samples = mot.orbit(axis, x, theta_from, theta_to, steps)
    e = ent.as_entity(x)
    if e.role == "point":
        header = ["theta"] + _COORD_NAMES[x.sig.space_tag]
        rows = [[t] + list(ent.point_coords(v)) for t, v in samples]
    else:
        names = [(m, nm, s) for m, nm, s in blade_names(x.sig) if x.sig.tables.grade[m] == e.grade]
        header = ["theta"] + [nm for _, nm, _ in names]
        rows = []
        for t, v in samples:
            try:
                v = v.normalized()
            except ArithmeticError:
                pass
            rows.append([t] + [s * float(v.coeffs[m]) for m, _, s in names])
    return header, rows


def emit_orbit(env: dict, generator: str, entity: str, theta_from: float, theta_to: float, steps: int, out_path: str) -> int:
    """Write the orbit CSV; returns the number of data rows."""
    for name in (generator, entity):
        if name not in env:
            raise KeyError(f"name {name!r} is not bound by the script")
    axis, x = env[generator], env[entity]
    if not isinstance(axis, Multivector) or not isinstance(x, Multivector):
        raise TypeError("generator and entity must be multivectors")
    header, rows = orbit_rows(axis, x, theta_from, theta_to, steps)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_csv_num(v) for v in r])
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    return len(rows)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise _Fail(EXIT_IO, f"cannot read {path}: {e}") from e


def _run_script(args, out) -> dict:
    text = _read(args.script)
    space = args.space.upper()
    try:
        script = parse(text, space)
    except ScriptError as e:
        raise _Fail(EXIT_PARSE, f"{args.script}:{e}") from e
    try:
        return evaluate(script, space, out)
    except EvalError as e:
        raise _Fail(EXIT_EVAL, f"{args.script}:{e}") from e


def _cmd_eval(args) -> None:
    _run_script(args, sys.stdout)


def _cmd_orbit(args) -> None:
    env = _run_script(args, sys.stdout)
    try:
        emit_orbit(env, args.generator, args.entity, args.theta_from, args.theta_to, args.steps, args.out)
    except OSError as e:
        raise _Fail(EXIT_IO, f"cannot write {args.out}: {e}") from e
    except Exception as e:  # noqa: BLE001 - every evaluation failure maps to exit code 3
        raise _Fail(EXIT_EVAL, f"orbit: {e}") from e


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mpga", description="Evaluate Minkowski PGA scene scripts.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--space", required=True, type=str.lower, choices=["m2", "m3", "m4"])
        sp.add_argument("--tol", type=float, default=None, help="relative classification tolerance")
        sp.add_argument("script", help="path to a .mpga script")

    ev = sub.add_parser("eval", help="run a script and print its print statements")
    common(ev)
    ev.set_defaults(func=_cmd_eval)

    orb = sub.add_parser("orbit", help="write the orbit of an entity under exp(-theta/2 A) as CSV")
    common(orb)
    orb.add_argument("--generator", required=True)
    orb.add_argument("--entity", required=True)
    orb.add_argument("--from", dest="theta_from", type=float, required=True)
    orb.add_argument("--to", dest="theta_to", type=float, required=True)
    orb.add_argument("--steps", type=int, required=True)
    orb.add_argument("--out", required=True)
    orb.set_defaults(func=_cmd_orbit)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_PARSE
    try:
        if args.tol is not None:
            if not args.tol > 0:
                raise _Fail(EXIT_PARSE, "--tol must be positive")
            with tolerance(rel=args.tol):
                args.func(args)
        else:
            args.func(args)
    except _Fail as e:
        print(f"mpga: {e}", file=sys.stderr)
        return e.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
