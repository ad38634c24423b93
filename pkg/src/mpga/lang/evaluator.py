"""Evaluation of parsed scripts and rendering of the resulting values."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, TextIO

from .. import entities as ent
from .. import kinematics as kin
from .. import motions as mot
from ..algebra import (
    SPACES,
    Multivector,
    Signature,
    commutator,
    complement,
    geometric_product,
    grade_select,
    inner,
    polar,
    regressive_join,
    reverse,
    wedge,
)
from ..errors import MpgaError, UndefinedMeasure
from ..notation import fmt, render
from .syntax import (
    Assign,
    Binary,
    Blade,
    Call,
    Name,
    Num,
    Print,
    Script,
    TupleLit,
    Unary,
    UndefinedLit,
    parse,
)

CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Undefined:
    """Result of a measure that does not exist for its arguments."""

    reason: str

    def __str__(self) -> str:
        return f"undefined({self.reason})"


class EvalError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: E-EVAL: {message}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------- values


def render_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return fmt(float(v))
    if isinstance(v, Multivector):
        return render(v)
    if isinstance(v, tuple):
        return "(" + ", ".join(render_value(x) for x in v) + ")"
    if isinstance(v, ent.Classification):
        return f"classification({v})"
    if isinstance(v, mot.BivectorDecomposition):
        return f"decomposition({v.regime}; {render(v.part1)}; {render(v.part2)})"
    if isinstance(v, mot.MotionDescriptor):
        axes = "; ".join(render(a) for a in v.axes)
        return f"motion({v}; axes: {axes})" if axes else f"motion({v})"
    return str(v)


def _num(v, what: str = "argument") -> float:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    if isinstance(v, Multivector) and v.grade == 0:
        return v.scalar_part()
    raise TypeError(f"{what} must be a number")


def _mv(v, sig: Signature) -> Multivector:
    if isinstance(v, Multivector):
        return v
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return sig.scalar(float(v))
    raise TypeError(f"expected a multivector, got {render_value(v)}")


def _nums(v) -> tuple[float, ...]:
    if isinstance(v, tuple):
        return tuple(_num(x, "tuple entry") for x in v)
    return (_num(v),)


def _demote(v):
    """Plain scalar multivectors become numbers so that math functions apply."""
    if isinstance(v, mot.Spinor):
        return v.mv
    return v


# ---------------------------------------------------------------- call table


@dataclass(frozen=True)
class Builtin:
    fn: Callable
    arity: dict[str | None, frozenset[int]]

    def allowed(self, space: str | None) -> frozenset[int]:
        if space in self.arity:
            return self.arity[space]
        return frozenset().union(*self.arity.values())


def _ar(*counts, **per_space) -> dict:
    d = {None: frozenset(counts)} if counts else {}
    for k, v in per_space.items():
        d[k] = frozenset(v if isinstance(v, (tuple, list, set)) else (v,))
    if counts:
        for k in ("M2", "M3", "M4"):
            d.setdefault(k, d[None])
    return d


def _point(sig, *c):
    return ent.make_point(sig, 1.0, *(_num(x) for x in c))


def _line(sig, *c):
    return ent.make_line(sig, *(_num(x) for x in c))


def _plane(sig, *c):
    return ent.make_plane(sig, *(_num(x) for x in c))


def _hyperplane(sig, *c):
    return ent.make_hyperplane(sig, *(_num(x) for x in c))


def _worldline(sig, *c):
    c = [_num(x) for x in c]
    if sig.space_tag == "M3":
        return ent.worldline_m3(*c)
    return ent.worldline_m4(*c)


def _line_param(sig, d, phi):
    return ent.parametrize_line_m2(_num(d), _num(phi))


def _exp(sig, a):
    a = _mv(a, sig)
    if a.grade == 0:
        return sig.scalar(math.exp(a.scalar_part()))
    return mot.exp_bivector(a).mv


def _apply(sig, s, x):
    return mot.apply(_mv(s, sig), _mv(x, sig))


def _boost(sig, *c):
    c = [_num(x) for x in c]
    if sig.space_tag == "M2":
        return mot.make_rotation_m2(ent.origin(sig), c[0]).mv
    if sig.space_tag == "M3":
        return mot.make_boost_m3(*c).mv
    return mot.make_boost_m4(*c).mv


def _translate(sig, a, lam):
    return mot.make_translation(_mv(a, sig), _num(lam)).mv


def _rotate(sig, axis, theta):
    return mot.make_rotation(_mv(axis, sig), _num(theta)).mv


def _distance(sig, a, b):
    a, b = ent.as_entity(_mv(a, sig)), ent.as_entity(_mv(b, sig))
    if a.role == "point" and b.role == "point":
        return ent.distance_points(a, b)
    if b.role == "point":
        return ent.distance_line_point(a, b)
    if a.role == "point":
        return ent.distance_line_point(b, a)
    return ent.distance_parallel_lines(a, b)


def _angle(sig, a, b):
    return ent.angle_lines(_mv(a, sig), _mv(b, sig))


def _area(sig, p, q, r):
    return ent.triangle_area(*(_mv(x, sig) for x in (p, q, r)))


def _volume(sig, p, q, r, s):
    return ent.simplex_volume(*(_mv(x, sig) for x in (p, q, r, s)))


def _decompose(sig, x):
    x = _mv(x, sig)
    if sig.space_tag == "M3":
        return mot.decompose_bivector_m3(x)
    if sig.space_tag == "M4":
        return mot.decompose_trivector_m4(x) if x.grade == 3 else mot.decompose_bivector_m4(x)
    raise TypeError("decompose is available in M3 and M4")


def _part(sig, d, k):
    if not isinstance(d, mot.BivectorDecomposition):
        raise TypeError("part() needs a decomposition")
    k = int(_num(k))
    if k not in (1, 2):
        raise ValueError("part index is 1 or 2")
    return d.part1 if k == 1 else d.part2


def _grade(sig, x, k):
    return grade_select(_mv(x, sig), int(_num(k)))


def _normalize(sig, x):
    x = _mv(x, sig)
    e = ent.as_entity(x)
    if e.role == "point":
        return ent.normalize_point(e)
    return x.normalized()


def _gamma(sig, v):
    return kin.gamma(_nums(v))


def _addvel(sig, u, v):
    return kin.add_velocity_m2(_num(u), _num(v))


def _boostvel(sig, u, v):
    return kin.boost_velocity(_nums(u), _nums(v))


def _lorentz(sig, e, v):
    return kin.lorentz(_nums(e), _nums(v))


def _velocity(sig, line):
    u = kin.line_velocity(_mv(line, sig))
    return u[0] if len(u) == 1 else u


def _coords(sig, p):
    return ent.point_coords(_mv(p, sig))


def _orbit(sig, axis, x, t0, t1, steps):
    rows = mot.orbit(_mv(axis, sig), _mv(x, sig), _num(t0), _num(t1), int(_num(steps)))
    return tuple((t, v) for t, v in rows)


def _math(f):
    return lambda sig, *a: f(*(_num(x) for x in a))


BUILTINS: dict[str, Builtin] = {
    "point": Builtin(_point, _ar(M2=2, M3=3, M4=4)),
    "line": Builtin(_line, _ar(M2=3, M3=6, M4=10)),
    "plane": Builtin(_plane, _ar(M3=4, M4=10)),
    "hyperplane": Builtin(_hyperplane, _ar(M4=5)),
    "worldline": Builtin(_worldline, _ar(M3=2, M4=3)),
    "line_param": Builtin(_line_param, _ar(M2=2)),
    "exp": Builtin(_exp, _ar(1)),
    "apply": Builtin(_apply, _ar(2)),
    "boost": Builtin(_boost, _ar(M2=1, M3=2, M4=3)),
    "translate": Builtin(_translate, _ar(2)),
    "rotate": Builtin(_rotate, _ar(2)),
    "distance": Builtin(_distance, _ar(2)),
    "angle": Builtin(_angle, _ar(2)),
    "area": Builtin(_area, _ar(M2=3)),
    "volume": Builtin(_volume, _ar(M3=4)),
    "decompose": Builtin(_decompose, _ar(M3=1, M4=1)),
    "part": Builtin(_part, _ar(2)),
    "classify": Builtin(lambda sig, x: ent.classify(_mv(x, sig)), _ar(1)),
    "motion": Builtin(lambda sig, a: mot.classify_motion(_mv(a, sig)), _ar(1)),
    "orbit": Builtin(_orbit, _ar(5)),
    "grade": Builtin(_grade, _ar(2)),
    "reverse": Builtin(lambda sig, x: reverse(_mv(x, sig)), _ar(1)),
    "polar": Builtin(lambda sig, x: polar(_mv(x, sig)), _ar(1)),
    "dual": Builtin(lambda sig, x: complement(_mv(x, sig)), _ar(1)),
    "norm": Builtin(lambda sig, x: _mv(x, sig).norm(), _ar(1)),
    "normalize": Builtin(_normalize, _ar(1)),
    "inverse": Builtin(lambda sig, x: _mv(x, sig).inverse(), _ar(1)),
    "project": Builtin(lambda sig, a, b: ent.project(_mv(a, sig), _mv(b, sig)), _ar(2)),
    "reject": Builtin(lambda sig, a, b: ent.reject(_mv(a, sig), _mv(b, sig)), _ar(2)),
    "reflect": Builtin(lambda sig, b, a: ent.reflect(_mv(b, sig), _mv(a, sig)), _ar(2)),
    "gamma": Builtin(_gamma, _ar(1)),
    "addvel": Builtin(_addvel, _ar(2)),
    "boostvel": Builtin(_boostvel, _ar(2)),
    "lorentz": Builtin(_lorentz, _ar(2)),
    "velocity": Builtin(_velocity, _ar(1)),
    "coords": Builtin(_coords, _ar(1)),
    "undefined": Builtin(lambda sig, r: Undefined(r), _ar(1)),
    "sqrt": Builtin(_math(math.sqrt), _ar(1)),
    "sin": Builtin(_math(math.sin), _ar(1)),
    "cos": Builtin(_math(math.cos), _ar(1)),
    "tan": Builtin(_math(math.tan), _ar(1)),
    "sinh": Builtin(_math(math.sinh), _ar(1)),
    "cosh": Builtin(_math(math.cosh), _ar(1)),
    "tanh": Builtin(_math(math.tanh), _ar(1)),
    "asinh": Builtin(_math(math.asinh), _ar(1)),
    "acosh": Builtin(_math(math.acosh), _ar(1)),
    "atanh": Builtin(_math(math.atanh), _ar(1)),
    "atan2": Builtin(_math(math.atan2), _ar(2)),
    "abs": Builtin(_math(abs), _ar(1)),
}


def arity_table(space: str | None) -> dict[str, frozenset[int]]:
    return {name: b.allowed(space) for name, b in BUILTINS.items()}


# ---------------------------------------------------------------- evaluation


def _binary(op: str, a, b, sig: Signature):
    if isinstance(a, Undefined) or isinstance(b, Undefined):
        return a if isinstance(a, Undefined) else b
    both_num = all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (a, b))
    if both_num:
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op in ("*", "^", "."):
            return a * b
        if op == "/":
            return a / b
        if op == "x":
            return 0.0
    if op == "/":
        if isinstance(b, (int, float)):
            return _mv(a, sig) / b
        return geometric_product(_mv(a, sig), _mv(b, sig).inverse())
    a, b = _mv(a, sig), _mv(b, sig)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return geometric_product(a, b)
    if op == "^":
        return wedge(a, b)
    if op == ".":
        return inner(a, b)
    if op == "&":
        return regressive_join(a, b)
    if op == "x":
        return commutator(a, b)
    raise ValueError(f"unknown operator {op!r}")


def _unary(op: str, v, sig: Signature):
    if op == "+":
        return v
    if isinstance(v, Undefined):
        return v
    if op == "-":
        if isinstance(v, tuple):
            return tuple(-x for x in v)
        return -v
    return reverse(_mv(v, sig))


class Evaluator:
    def __init__(self, sig: Signature):
        self.sig = sig
        self.env: dict[str, object] = {}

    def eval(self, node):
        if isinstance(node, Num):
            return node.value
        if isinstance(node, Blade):
            return self.sig.blade(node.name)
        if isinstance(node, Name):
            if node.name in CONSTANTS:
                return CONSTANTS[node.name]
            return self.env[node.name]
        if isinstance(node, UndefinedLit):
            return Undefined(node.reason)
        if isinstance(node, TupleLit):
            return tuple(self.eval(x) for x in node.items)
        if isinstance(node, Unary):
            return self.guard(node, lambda: _unary(node.op, self.eval(node.arg), self.sig))
        if isinstance(node, Binary):
            left, right = self.eval(node.left), self.eval(node.right)
            return self.guard(node, lambda: _binary(node.op, left, right, self.sig))
        if isinstance(node, Call):
            args = [self.eval(a) for a in node.args]
            b = BUILTINS[node.name]
            allowed = b.allowed(self.sig.space_tag)
            if len(args) not in allowed:
                raise EvalError(f"{node.name}() is not available with {len(args)} argument(s) in {self.sig.space_tag}", *node.pos)
            if any(isinstance(a, Undefined) for a in args):
                return next(a for a in args if isinstance(a, Undefined))
            return self.guard(node, lambda: _demote(b.fn(self.sig, *args)))
        raise TypeError(f"unknown node {node!r}")

    def guard(self, node, thunk):
        try:
            out = thunk()
        except UndefinedMeasure as e:
            return Undefined(e.reason)
        except (MpgaError, ArithmeticError, ValueError, TypeError) as e:
            raise EvalError(str(e), *node.pos) from e
        if isinstance(out, Multivector) and not isinstance(out, ent.Entity) and out.grade == 0:
            return out.scalar_part()
        if isinstance(out, float) and not math.isfinite(out):
            raise EvalError("result is not finite", *node.pos)
        return out


def evaluate(script: Script | str, space: str, out: TextIO | None = None) -> dict[str, object]:
    """Run ``script`` in ``space``; ``print`` statements write to ``out``."""
    sig = SPACES[space.upper()]
    if isinstance(script, str):
        script = parse(script, sig.space_tag)
    ev = Evaluator(sig)
    for st in script.statements:
        if isinstance(st, Assign):
            ev.env[st.name] = ev.eval(st.expr)
        elif isinstance(st, Print):
            v = ev.eval(st.expr)
            if out is not None:
                out.write(render_value(v) + "\n")
    return ev.env


def run(text: str, space: str, out: TextIO | None = None) -> dict[str, object]:
    return evaluate(parse(text, space.upper()), space, out)
