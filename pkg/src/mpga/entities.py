"""Points, lines, planes and hyperplanes of M2, M3, M4, and their measures.

Standard forms (homogeneous weight ``w``):

* M2: line ``d e0 + a e1 + h e2``, point ``w e12 + x e20 + t e01``
* M3: plane ``d e0 + a e1 + b e2 + h e3``, point ``w e123 + x e320 + y e130 + t e210``
* M4: hyperplane ``d e0 + a e1 + b e2 + c e3 + h e4``,
  point ``w e1234 + x e2340 + y e3140 + z e1240 + t e3210``

Measures raise :class:`~mpga.errors.UndefinedMeasure` instead of returning a
number whenever the quantity is not defined (null or improper joins, mixed
orientations, ...).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import M2, M3, M4, Multivector, Signature, geometric_product, inner, is_simple, regressive_join, wedge
from .config import get_tolerances
from .errors import NotInvertible, ParametrizationError, UndefinedMeasure, UndefinedOrientation, UsageError

ROLE_GRADES = {
    "M2": {"line": 1, "point": 2},
    "M3": {"plane": 1, "line": 2, "point": 3},
    "M4": {"hyperplane": 1, "plane": 2, "line": 3, "point": 4},
}

_POINT_BLADES = {
    "M2": ["e12", "e20", "e01"],
    "M3": ["e123", "e320", "e130", "e210"],
    "M4": ["e1234", "e2340", "e3140", "e1240", "e3210"],
}
_M3_LINE_BLADES = ["e10", "e20", "e30", "e23", "e31", "e12"]
_M4_PLANE_BLADES = ["e10", "e20", "e30", "e40", "e23", "e31", "e12", "e41", "e42", "e43"]
_M4_LINE_BLADES = ["e234", "e314", "e124", "e321", "e230", "e310", "e120", "e410", "e420", "e430"]
_TIME_AXIS = {"M2": "e1", "M3": "e12", "M4": "e321"}


class Entity(Multivector):
    """A homogeneous multivector tagged with its geometric role."""

    __slots__ = ("role",)

    def __init__(self, sig: Signature, coeffs, role: str):
        super().__init__(sig, coeffs)
        grades = ROLE_GRADES.get(sig.space_tag)
        if grades is None or role not in grades:
            raise UsageError(f"no role {role!r} in {sig.space_tag}")
        g = self.grade
        if g not in (grades[role], 0) or (g == 0 and self.scale_of() > 0):
            raise UsageError(f"{role} in {sig.space_tag} must have grade {grades[role]}, got {g}")
        object.__setattr__(self, "role", role)

    def __repr__(self) -> str:
        return f"{self.role}({super().__repr__()})"


def as_entity(mv: Multivector, role: str | None = None) -> Entity:
    """Tag ``mv`` with ``role`` (inferred from its grade when omitted)."""
    if isinstance(mv, Entity) and (role is None or role == mv.role):
        return mv
    if role is None:
        g = mv.grade
        by_grade = {v: k for k, v in ROLE_GRADES.get(mv.sig.space_tag, {}).items()}
        if g not in by_grade:
            raise UsageError(f"grade {g} multivector has no geometric role in {mv.sig.space_tag}")
        role = by_grade[g]
    return Entity(mv.sig, mv.coeffs, role)


def _from_blades(sig: Signature, names: Sequence[str], coords: Sequence[float], role: str) -> Entity:
    if len(coords) != len(names):
        raise UsageError(f"{sig.space_tag} {role} takes {len(names)} coordinates, got {len(coords)}")
    acc = sig.zero()
    for name, c in zip(names, coords):
        acc = acc + sig.blade(name, float(c))
    return Entity(sig, acc.coeffs, role)


def _rel_tol() -> float:
    return get_tolerances().rel


# ---------------------------------------------------------------- constructors


def make_point(sig: Signature, *coords: float) -> Entity:
    """Point from ``(w, x[, y[, z]], t)``."""
    return _from_blades(sig, _POINT_BLADES[sig.space_tag], coords, "point")


def make_line(sig: Signature, *coords: float) -> Entity:
    """Line: M2 ``(d, a, h)``; M3 ``(p10, p20, p30, p23, p31, p12)``;
    M4 ``(s234, s314, s124, s321, s230, s310, s120, s410, s420, s430)``."""
    tag = sig.space_tag
    if tag == "M2":
        return _from_blades(sig, ["e0", "e1", "e2"], coords, "line")
    if tag == "M3":
        e = _from_blades(sig, _M3_LINE_BLADES, coords, "line")
        p10, p20, p30, p23, p31, p12 = (float(c) for c in coords)
        if abs(p10 * p23 + p20 * p31 + p30 * p12) > _rel_tol() * max(sum(c * c for c in coords), 1e-300):
            raise UsageError("coefficients violate the Pluecker condition p10 p23 + p20 p31 + p30 p12 = 0")
        return e
    if tag == "M4":
        e = _from_blades(sig, _M4_LINE_BLADES, coords, "line")
        if not is_simple(e):
            raise UsageError("line coefficients do not form a simple trivector")
        return e
    raise UsageError(f"no lines in {tag}")


def make_plane(sig: Signature, *coords: float) -> Entity:
    """Plane: M3 ``(d, a, b, h)``; M4 ``(p10, p20, p30, p40, p23, p31, p12, p41, p42, p43)``."""
    if sig.space_tag == "M3":
        return _from_blades(sig, ["e0", "e1", "e2", "e3"], coords, "plane")
    if sig.space_tag == "M4":
        e = _from_blades(sig, _M4_PLANE_BLADES, coords, "plane")
        if not is_simple(e):
            raise UsageError("plane coefficients do not form a simple bivector")
        return e
    raise UsageError(f"no planes in {sig.space_tag}")


def make_hyperplane(sig: Signature, *coords: float) -> Entity:
    """Hyperplane of M4 from ``(d, a, b, c, h)``."""
    if sig.space_tag != "M4":
        raise UsageError("hyperplanes exist only in M4")
    return _from_blades(sig, ["e0", "e1", "e2", "e3", "e4"], coords, "hyperplane")


def point_coords(p: Multivector) -> tuple[float, ...]:
    """Normalised coordinates ``(x[, y[, z]], t)`` of a finite point."""
    names = _POINT_BLADES[p.sig.space_tag]
    w = p[names[0]]
    if abs(w) <= _rel_tol() * max(p.scale_of(), 1e-300):
        raise UsageError("point at infinity has no finite coordinates")
    return tuple(p[n] / w for n in names[1:])


def point_weight(p: Multivector) -> float:
    return p[_POINT_BLADES[p.sig.space_tag][0]]


def normalize_point(p: Multivector) -> Entity:
    w = point_weight(p)
    if abs(w) <= _rel_tol() * max(p.scale_of(), 1e-300):
        raise UsageError("cannot normalise a point at infinity")
    return as_entity(p / w, "point")


def origin(sig: Signature) -> Entity:
    return make_point(sig, 1.0, *([0.0] * (sig.n - 1)))


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class Classification:
    """``metric_kind`` is ``proper``/``improper``/``null`` for finite
    lines, planes and hyperplanes and ``None`` for points and for objects at
    infinity (which are not called null)."""

    metric_kind: str | None
    locus: str
    orientation: str
    square: float

    def __str__(self) -> str:
        return f"{self.metric_kind or 'n/a'}, {self.locus}, {self.orientation}"


def is_at_infinity(e: Multivector) -> bool:
    total = float(np.sqrt(np.sum(e.coeffs**2)))
    finite = float(np.sqrt(np.sum(e.e0_free().coeffs ** 2)))
    return finite <= _rel_tol() * total


def _role(e: Multivector) -> str:
    return e.role if isinstance(e, Entity) else as_entity(e).role


def metric_kind(e: Multivector) -> str | None:
    """Proper / improper / null for finite non-point objects, else ``None``."""
    role = _role(e)
    if role == "point" or is_at_infinity(e):
        return None
    sq = e.square()
    if abs(sq) <= _rel_tol() * float(np.sum(e.coeffs**2)):
        return "null"
    positive_is_proper = e.grade == 1
    return "proper" if (sq > 0) == positive_is_proper else "improper"


def classify(e: Multivector) -> Classification:
    kind = metric_kind(e)
    locus = "at_infinity" if is_at_infinity(e) else "finite"
    orient = "not_applicable"
    if kind == "proper" and _role(e) == "line":
        orient = orientation(e)
    return Classification(kind, locus, orient, e.square())


def orientation(e: Multivector) -> str:
    """``future`` / ``past`` for proper lines (M4 rule mirrors M3: test against ``e321``)."""
    if _role(e) != "line":
        raise UndefinedOrientation("not_a_line", "orientation is defined for lines only")
    kind = metric_kind(e)
    if kind != "proper":
        raise UndefinedOrientation(kind or "at_infinity", f"orientation undefined for {kind or 'at-infinity'} line")
    t = e.sig.blade(_TIME_AXIS[e.sig.space_tag])
    s = inner(e, t).scalar_part()
    return "future" if s > 0 else "past"


# ---------------------------------------------------------------- measures


def _require(e: Multivector, role: str, what: str) -> Entity:
    ent = as_entity(e)
    if ent.role != role:
        raise UsageError(f"{what} must be a {role}, got a {ent.role}")
    return ent


def _join_kind(p: Multivector, q: Multivector) -> tuple[str, Multivector]:
    j = regressive_join(normalize_point(p), normalize_point(q))
    if j.is_zero():
        return "coincident", j
    if is_at_infinity(j):
        return "at_infinity", j
    return metric_kind(as_entity(j, "line")), j


def distance_points(p: Multivector, q: Multivector, formal: bool = False) -> float:
    """``||P v Q||`` for finite points joined by a proper line.

    With ``formal=True`` the norm is returned for null and improper joins as
    well (zero for null joins) instead of raising.
    """
    _require(p, "point", "P")
    _require(q, "point", "Q")
    kind, j = _join_kind(p, q)
    if kind == "coincident":
        return 0.0
    if kind != "proper" and not formal:
        raise UndefinedMeasure(kind, f"distance undefined: points joined by a {kind} line")
    return j.norm()


def distance_line_point(a: Multivector, p: Multivector) -> float:
    """Distance from a hyperplane (M2 line, M3 plane, M4 hyperplane) or an M3
    line to a finite point.

    Hyperplanes must be improper (``|a v P|``); for an M3 line the
    perpendicular ``(L.P) ^ (L v P)`` must be proper (``||L v P||``).
    """
    _require(p, "point", "P")
    pn = normalize_point(p)
    ent = as_entity(a)
    if ent.grade == 1:
        kind = metric_kind(ent)
        if kind != "improper":
            raise UndefinedMeasure(kind or "at_infinity", f"distance to a {kind or 'at-infinity'} hyperplane is undefined")
        return abs(regressive_join(ent.normalized(), pn).scalar_part())
    if ent.sig.space_tag == "M3" and ent.role == "line":
        if metric_kind(ent) in (None, "null"):
            raise UndefinedMeasure(metric_kind(ent) or "at_infinity")
        ln = ent.normalized()
        through = regressive_join(ln, pn)
        if through.is_zero():
            return 0.0
        perp = wedge(inner(ln, pn), through)
        kind = metric_kind(as_entity(perp, "line")) if not is_at_infinity(perp) else None
        if kind != "proper":
            raise UndefinedMeasure(kind or "at_infinity", "perpendicular from the point to the line is not proper")
        return through.norm()
    raise UsageError(f"no line-point distance for a {ent.role} in {ent.sig.space_tag}")


def distance_parallel_lines(a: Multivector, b: Multivector) -> float:
    """Offset between two parallel improper M2 lines, ``||e12 v (a ^ b)||``."""
    a, b = _require(a, "line", "a"), _require(b, "line", "b")
    if a.sig.space_tag != "M2":
        raise UsageError("distance between parallel lines is implemented for M2")
    for x in (a, b):
        kind = metric_kind(x)
        if kind != "improper":
            raise UndefinedMeasure(kind or "at_infinity", f"distance between {kind or 'at-infinity'} lines is undefined")
    an, bn = a.normalized(), b.normalized()
    meet = wedge(an, bn)
    if meet.is_zero():
        return 0.0
    if not is_at_infinity(meet):
        raise UsageError("lines are not parallel")
    return regressive_join(origin(a.sig), meet).norm()


def angle_lines(a: Multivector, b: Multivector) -> float:
    """Hyperbolic angle ``arccosh`` between two proper lines of equal orientation.

    In M2 the lines meet at a finite point or are parallel (angle 0).  In M3 and
    M4 the lines must be coplanar (their join vanishes).
    """
    a, b = _require(a, "line", "a"), _require(b, "line", "b")
    oa, ob = orientation(a), orientation(b)
    if oa != ob:
        raise UndefinedMeasure("orientation", "angle undefined between future- and past-oriented lines")
    an, bn = a.normalized(), b.normalized()
    if a.sig.space_tag != "M2" and not regressive_join(an, bn).is_zero():
        raise UsageError("lines are skew; the angle needs coplanar lines")
    c = inner(an, bn).scalar_part() / an.square()
    if c < 1.0:
        if c < 1.0 - 1e-9:
            raise UndefinedMeasure("orientation")
        c = 1.0
    return math.acosh(c)


def _all_joins_proper(points) -> list[Entity]:
    pts = [normalize_point(_require(p, "point", "vertex")) for p in points]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            kind, _ = _join_kind(pts[i], pts[j])
            if kind not in ("proper", "coincident"):
                raise UndefinedMeasure(kind, f"vertices {i} and {j} are joined by a {kind} line")
    return pts


def triangle_area(p: Multivector, q: Multivector, r: Multivector) -> float:
    """``|P v Q v R| / 2!`` for an M2 triangle with proper edges."""
    if p.sig.space_tag != "M2":
        raise UsageError("triangle_area is defined for M2")
    P, Q, R = _all_joins_proper((p, q, r))
    return abs(regressive_join(regressive_join(P, Q), R).scalar_part()) / 2.0


def simplex_volume(p: Multivector, q: Multivector, r: Multivector, s: Multivector) -> float:
    """``|P v Q v R v S| / 3!`` for an M3 simplex with proper edges."""
    if p.sig.space_tag != "M3":
        raise UsageError("simplex_volume is defined for M3")
    P, Q, R, S = _all_joins_proper((p, q, r, s))
    return abs(regressive_join(regressive_join(regressive_join(P, Q), R), S).scalar_part()) / 6.0


# ---------------------------------------------------------------- parametrisations


def parametrize_line_m2(d: float, phi: float, orient: str = "future") -> Entity:
    if orient not in ("future", "past"):
        raise UsageError("orient must be 'future' or 'past'")
    s = 1.0 if orient == "future" else -1.0
    return make_line(M2, s * d, s * math.cosh(phi), -s * math.sinh(phi))


def line_params_m2(a: Multivector) -> tuple[float, float, str]:
    """Inverse of :func:`parametrize_line_m2`: ``(d, phi, orientation)``."""
    a = _require(a, "line", "a")
    if a.sig.space_tag != "M2" or metric_kind(a) != "proper":
        raise ParametrizationError("only proper M2 lines have a (d, phi) parametrisation")
    an = a.normalized()
    s = 1.0 if an["e1"] > 0 else -1.0
    return s * an["e0"], math.asinh(-s * an["e2"]), ("future" if s > 0 else "past")


def worldline_m3(alpha: float, phi: float) -> Entity:
    """Normalised proper line through the origin, moving at ``tanh(phi)`` in direction ``alpha``."""
    sh = math.sinh(phi)
    return make_line(M3, 0.0, 0.0, 0.0, math.cos(alpha) * sh, math.sin(alpha) * sh, math.cosh(phi))


def worldline_m4(alpha: float, beta: float, phi: float) -> Entity:
    sh = math.sinh(phi)
    sb = math.sin(beta)
    return make_line(
        M4,
        math.cos(alpha) * sb * sh,
        math.sin(alpha) * sb * sh,
        math.cos(beta) * sh,
        math.cosh(phi),
        0, 0, 0, 0, 0, 0,
    )


def _origin_worldline(line: Multivector, space_tag: str) -> Entity:
    ln = _require(line, "line", "worldline")
    if ln.sig.space_tag != space_tag or metric_kind(ln) != "proper":
        raise ParametrizationError("worldline parameters need a proper line")
    ln = ln.normalized()
    if not regressive_join(ln, origin(ln.sig)).is_zero():
        raise ParametrizationError("line does not pass through the origin")
    t = _TIME_AXIS[space_tag]
    return as_entity(ln if ln[t] > 0 else -ln, "line")


def _wrap_angle(a: float) -> float:
    return math.pi if a <= -math.pi else a


def worldline_params_m3(line: Multivector) -> tuple[float, float]:
    """``(alpha, phi)`` with ``phi >= 0`` and ``alpha`` in ``(-pi, pi]``."""
    ln = _origin_worldline(line, "M3")
    p23, p31 = ln["e23"], ln["e31"]
    sh = math.hypot(p23, p31)
    alpha = math.atan2(p31, p23) if sh > 1e-15 else 0.0
    return _wrap_angle(alpha), math.asinh(sh)


def worldline_params_m4(line: Multivector) -> tuple[float, float, float]:
    """``(alpha, beta, phi)`` with ``phi >= 0``, ``beta`` in ``[0, pi]``."""
    ln = _origin_worldline(line, "M4")
    sx, sy, sz = ln["e234"], ln["e314"], ln["e124"]
    sh = math.sqrt(sx * sx + sy * sy + sz * sz)
    if sh <= 1e-15:
        return 0.0, 0.0, 0.0
    beta = math.acos(max(-1.0, min(1.0, sz / sh)))
    alpha = math.atan2(sy, sx) if math.hypot(sx, sy) > 1e-15 else 0.0
    return _wrap_angle(alpha), beta, math.asinh(sh)


# ---------------------------------------------------------------- projections


def _keep_role(result: Multivector, like: Multivector) -> Multivector:
    if isinstance(like, Entity) and result.grade in (like.grade, 0):
        return Entity(result.sig, result.coeffs, like.role)
    return result


def project(a: Multivector, b: Multivector) -> Multivector:
    """Projection of ``a`` onto ``b``: ``(a . b) b^-1``."""
    return _keep_role(geometric_product(inner(a, b), b.inverse()).grade_select(a.grade), a)


def reject(a: Multivector, b: Multivector) -> Multivector:
    """Rejection of ``a`` by ``b``: ``(a ^ b) b^-1``."""
    return _keep_role(geometric_product(wedge(a, b), b.inverse()).grade_select(a.grade), a)


def reflect(b: Multivector, a: Multivector) -> Multivector:
    """Bottom-up reflection of ``a`` in ``b``.

    Sandwich ``b a b^-1``; for odd ``b`` (reflection in a hyperplane) objects of
    even grade pick up a minus sign, e.g. ``-b L b^-1`` for an M3 line.
    """
    if b.grade is None:
        raise UsageError("reflection needs a homogeneous mirror")
    try:
        binv = b.inverse()
    except NotInvertible:
        raise NotInvertible("cannot reflect in a null object") from None
    out = geometric_product(geometric_product(b, a), binv)
    if b.grade % 2 == 1 and a.grade is not None and a.grade % 2 == 0:
        out = -out
    return _keep_role(out, a)


def scale(p: Multivector, center: Multivector, k: float) -> Entity:
    """Homothety of a finite point about ``center`` by factor ``k``."""
    P = normalize_point(_require(p, "point", "P"))
    C = normalize_point(_require(center, "point", "center"))
    return as_entity(C + (P - C) * k, "point")
