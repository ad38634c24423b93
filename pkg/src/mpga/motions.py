"""Spinors, bivector exponentials, invariant decompositions and motion classification."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    M2,
    M3,
    M4,
    Multivector,
    Signature,
    commutator,
    geometric_product,
    inner,
    is_simple,
    regressive_join,
    reverse,
    wedge,
)
from .config import get_tolerances
from .entities import Entity, _keep_role, as_entity, is_at_infinity, metric_kind, normalize_point
from .errors import ConvergenceError, UsageError

SERIES_MAX_TERMS = 64


# ---------------------------------------------------------------- spinors


@dataclass(frozen=True, eq=False)
class Spinor:
    """Even multivector with ``S ~S = 1``; ``generator`` is ``A`` when ``S = e^A``."""

    mv: Multivector
    generator: Multivector | None = None

    def __post_init__(self):
        if any(g % 2 for g in self.mv.grades()):
            raise UsageError("spinors are even multivectors")
        n = geometric_product(self.mv, reverse(self.mv))
        scale = max(float(np.sum(self.mv.coeffs**2)), 1.0)
        if not n.allclose(self.mv.sig.scalar(1.0), rtol=1e-9 * scale, atol=1e-9 * scale):
            raise UsageError(f"S ~S = {n!r}, not 1")

    def __mul__(self, other: "Spinor") -> "Spinor":
        if not isinstance(other, Spinor):
            return NotImplemented
        return Spinor(geometric_product(self.mv, other.mv))

    def __neg__(self) -> "Spinor":
        return Spinor(-self.mv)

    def reverse(self) -> "Spinor":
        gen = None if self.generator is None else -self.generator
        return Spinor(reverse(self.mv), gen)

    inverse = reverse

    def apply(self, x: Multivector) -> Multivector:
        return apply(self, x)

    def __repr__(self) -> str:
        return f"Spinor({self.mv!r})"


def apply(s: Spinor | Multivector, x: Multivector) -> Multivector:
    """Sandwich ``S X S^-1`` (``S X ~S`` for spinors); grade preserving."""
    mv = s.mv if isinstance(s, Spinor) else s
    sinv = reverse(mv) if isinstance(s, Spinor) else mv.inverse()
    out = geometric_product(geometric_product(mv, x), sinv)
    g = x.grade
    if g is not None:
        out = out.grade_select(g)
    return _keep_role(out, x)


# ---------------------------------------------------------------- exponential


def _cosh_c(s: float) -> float:
    """cosh(sqrt(s)) continued to s < 0 as cos(sqrt(-s))."""
    if abs(s) < 1e-4:
        return 1.0 + s / 2.0 + s * s / 24.0 + s**3 / 720.0
    r = math.sqrt(abs(s))
    return math.cosh(r) if s > 0 else math.cos(r)


def _sinh_c(s: float) -> float:
    """sinh(sqrt(s))/sqrt(s), continued likewise."""
    if abs(s) < 1e-4:
        return 1.0 + s / 6.0 + s * s / 120.0 + s**3 / 5040.0
    r = math.sqrt(abs(s))
    return math.sinh(r) / r if s > 0 else math.sin(r) / r


def _exp_simple(b: Multivector) -> Multivector:
    s = b.square()
    return b * _sinh_c(s) + _cosh_c(s)


def exp_series(a: Multivector, max_terms: int = SERIES_MAX_TERMS) -> Multivector:
    """Truncated power series, stopping once a term is below 1e-15 of the sum."""
    result = a.sig.scalar(1.0)
    term = a.sig.scalar(1.0)
    for k in range(1, max_terms + 1):
        term = geometric_product(term, a) / k
        result = result + term
        if term.scale_of() <= 1e-15 * max(result.scale_of(), 1e-300):
            return result
    raise ConvergenceError(f"exponential series did not converge in {max_terms} terms")


def _commuting_simple_parts(a: Multivector) -> list[Multivector] | None:
    if a.scale_of() == 0.0:
        return []
    tag = a.sig.space_tag
    if tag == "M2":
        return [a]
    if tag == "M3":
        d = decompose_bivector_m3(a)
    elif tag == "M4":
        d = decompose_bivector_m4(a)
    else:
        return [a] if is_simple(a) else None
    if d.regime == "irreducible":
        return None
    return [p for p in (d.part1, d.part2) if p.scale_of() > 0.0]


def exp_bivector(a: Multivector) -> Spinor:
    """``e^A`` for a bivector ``A``.

    ``A`` is split into commuting simple parts, each exponentiated in closed
    form (cos/sin, cosh/sinh, or ``1 + B`` for nilpotent parts); irreducible
    null bivectors fall back to the power series.
    """
    if a.grade not in (2, 0) or (a.grade == 0 and a.scale_of() > 0):
        raise UsageError("exp_bivector needs a bivector")
    parts = _commuting_simple_parts(a)
    if parts is None:
        return Spinor(exp_series(a), a)
    out = a.sig.scalar(1.0)
    for p in parts:
        out = geometric_product(out, _exp_simple(p))
    return Spinor(out, a)


# ---------------------------------------------------------------- constructors


def make_rotation(axis: Multivector, theta: float) -> Spinor:
    """``exp(-theta/2 * axis)``."""
    return exp_bivector(axis * (-0.5 * theta))


def make_rotation_m2(center: Multivector, phi: float) -> Spinor:
    """Rotation by ``phi`` about a finite M2 point (clockwise point ``S = -P``)."""
    if center.sig != M2:
        raise UsageError("make_rotation_m2 needs an M2 point")
    try:
        c = normalize_point(as_entity(center, "point"))
    except UsageError:
        raise UsageError("rotation centre must be a finite point") from None
    return exp_bivector(c * (0.5 * phi))


def make_translation(a: Multivector, lam: float) -> Spinor:
    """``exp(-lam/2 * e0 ^ a)`` for a finite hyperplane ``a``."""
    if a.grade != 1:
        raise UsageError("translation direction must be a vector (line/plane/hyperplane)")
    if is_at_infinity(a):
        raise UsageError("translation needs a finite line/plane/hyperplane")
    return exp_bivector(wedge(a.sig.blade("e0"), a) * (-0.5 * lam))


def _boost_axis_ok(axis: Multivector, t_blade: str) -> bool:
    e = axis.sig.blade(t_blade)
    w = wedge(e, axis)
    return abs(w.square()) <= 1e-9 * max(float(np.sum(w.coeffs**2)), 1e-300) + 1e-12


def make_boost_m3(alpha_b: float, phi_b: float, axis: Multivector | None = None) -> Spinor:
    """Boost by rapidity ``phi_b`` in direction ``alpha_b``; ``axis`` may replace
    the default ``-e23 sin(alpha_b) + e31 cos(alpha_b)`` by any line parallel
    to the xy-plane."""
    if axis is None:
        axis = M3.blade("e23", -math.sin(alpha_b)) + M3.blade("e31", math.cos(alpha_b))
    elif axis.sig != M3 or axis.grade != 2 or not _boost_axis_ok(axis, "e3"):
        raise UsageError("boost axis must be an M3 line with (e3 ^ axis)^2 = 0")
    return make_rotation(axis, phi_b)


def make_euclidean_m3(axis: Multivector | None, alpha: float) -> Spinor:
    """Euclidean rotation by ``alpha`` around a line parallel to the t-axis (default ``e12``)."""
    if axis is None:
        axis = M3.blade("e12")
    elif axis.sig != M3 or axis.grade != 2 or not inner(M3.blade("e3"), axis).is_zero(axis.scale_of()):
        raise UsageError("Euclidean rotation axis must satisfy e3 . axis = 0")
    return make_rotation(axis, alpha)


def boost_plane_m4(alpha_b: float, beta_b: float) -> Multivector:
    sb = math.sin(beta_b)
    return (
        M4.blade("e41", math.cos(alpha_b) * sb)
        + M4.blade("e42", math.sin(alpha_b) * sb)
        + M4.blade("e43", math.cos(beta_b))
    )


def euclidean_plane_m4(alpha_e: float, beta_e: float) -> Multivector:
    sb = math.sin(beta_e)
    return (
        M4.blade("e23", math.cos(alpha_e) * sb)
        + M4.blade("e31", math.sin(alpha_e) * sb)
        + M4.blade("e12", math.cos(beta_e))
    )


def make_boost_m4(alpha_b: float, beta_b: float, phi_b: float) -> Spinor:
    return make_rotation(boost_plane_m4(alpha_b, beta_b), phi_b)


def make_euclidean_m4(alpha_e: float, beta_e: float, alpha: float) -> Spinor:
    return make_rotation(euclidean_plane_m4(alpha_e, beta_e), alpha)


# ---------------------------------------------------------------- decompositions


@dataclass(frozen=True)
class BivectorDecomposition:
    """``part1 + part2`` equals the input unless ``regime == "irreducible"``.

    Regimes: ``simple``, ``two_finite_axes``, ``finite_plus_infinity``,
    ``two_at_infinity`` (trivectors only), ``null_nonunique``, ``irreducible``.
    """

    part1: Multivector
    part2: Multivector
    regime: str

    @property
    def parts(self) -> tuple[Multivector, Multivector]:
        return self.part1, self.part2


def _sumsq(x: Multivector) -> float:
    return float(np.sum(x.coeffs**2))


def _negligible(value: float, scale: float) -> bool:
    return abs(value) <= get_tolerances().rel * scale + get_tolerances().abs


def cube(x: Multivector) -> Multivector:
    return geometric_product(geometric_product(x, x), x)


def _cube_is_zero(x: Multivector) -> bool:
    return cube(x).scale_of() <= 1e-9 * x.scale_of() ** 3 + get_tolerances().abs


def decompose_bivector_m3(b: Multivector) -> BivectorDecomposition:
    """Split an M3 bivector into a finite axis and an axis at infinity."""
    if b.sig != M3 or b.grade not in (2, 0):
        raise UsageError("decompose_bivector_m3 needs an M3 bivector")
    zero = b.sig.zero()
    if is_simple(b):
        return BivectorDecomposition(b, zero, "simple")
    dd = inner(b, b).scalar_part()
    if _negligible(dd, _sumsq(b)):
        return BivectorDecomposition(b, zero, "irreducible")
    a = regressive_join(b, b).scalar_part() / (2.0 * dd)
    aI = b.sig.I * a
    part2 = geometric_product(aI, b).grade_select(2)
    return BivectorDecomposition(b - part2, part2, "finite_plus_infinity")


def _bivector_basis(sig: Signature) -> list[int]:
    return [m for m in range(sig.size) if bin(m).count("1") == 2]


def split_by_centralizer(b: Multivector) -> tuple[Multivector, Multivector] | None:
    """Generic search for ``b = p1 + p2`` with simple, commuting ``p1``, ``p2``.

    ``p1`` solves the linear system ``p1 x b = 0``, ``b ^ p1 = (b ^ b)/2``; the
    remaining freedom (an affine family, larger than a point when the split
    is not unique) is searched for a simple member.  Deterministic: the
    minimum-norm particular solution and the SVD null space are used in
    order.  Returns ``None`` if no simple member is found.
    """
    sig = b.sig
    basis = _bivector_basis(sig)
    k = len(basis)
    cols_c, cols_w = [], []
    for m in basis:
        e = np.zeros(sig.size)
        e[m] = 1.0
        x = Multivector(sig, e)
        cols_c.append(commutator(x, b).coeffs[basis])
        cols_w.append(wedge(b, x).coeffs)
    grade4 = [m for m in range(sig.size) if bin(m).count("1") == 4]
    mat = np.vstack([np.array(cols_c).T, np.array(cols_w).T[grade4]])
    rhs = np.concatenate([np.zeros(k), 0.5 * wedge(b, b).coeffs[grade4]])
    x0, *_ = np.linalg.lstsq(mat, rhs, rcond=None)
    scale = max(b.scale_of(), 1e-300)
    if np.max(np.abs(mat @ x0 - rhs)) > 1e-9 * scale**2:
        return None
    _, sv, vt = np.linalg.svd(mat)
    rank = int(np.sum(sv > 1e-10 * max(sv[0], 1e-300)))
    null = vt[rank:]

    def embed(v):
        out = np.zeros(sig.size)
        out[basis] = v
        return Multivector(sig, out)

    def wedge_sq(v):
        x = embed(v)
        return wedge(x, x).coeffs[grade4]

    tol = 1e-18 * scale**4

    def accept(v):
        r = wedge_sq(v)
        return float(r @ r) <= tol

    if accept(x0):
        return _finish_split(b, embed(x0))
    # one-parameter families: x0 + t n for each null direction
    for n in null:
        q0 = wedge_sq(x0)
        lin = np.array(wedge(embed(x0), embed(n)).coeffs[grade4]) * 2.0
        quad = wedge_sq(n)
        for t in _common_roots(q0, lin, quad):
            v = x0 + t * n
            if accept(v):
                return _finish_split(b, embed(v))
    if len(null) >= 2:
        from scipy.optimize import least_squares

        starts = [np.zeros(len(null))] + [row for row in np.eye(len(null))]
        for y0 in starts:
            res = least_squares(lambda y: wedge_sq(x0 + y @ null) / scale**2, y0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
            v = x0 + res.x @ null
            if accept(v):
                return _finish_split(b, embed(v))
    return None


def _common_roots(q0, lin, quad) -> list[float]:
    """Real ``t`` with ``q0 + lin t + quad t^2 = 0`` in every component (candidates)."""
    cands: list[float] = []
    for c0, c1, c2 in zip(q0, lin, quad):
        if abs(c2) > 1e-12:
            disc = c1 * c1 - 4 * c2 * c0
            if disc >= -1e-12:
                r = math.sqrt(max(disc, 0.0))
                cands += [(-c1 + r) / (2 * c2), (-c1 - r) / (2 * c2)]
        elif abs(c1) > 1e-12:
            cands.append(-c0 / c1)
    return sorted(set(cands), key=lambda t: (abs(t), t))


def _finish_split(b: Multivector, p1: Multivector) -> tuple[Multivector, Multivector]:
    return p1, b - p1


def decompose_bivector_m4(b: Multivector) -> BivectorDecomposition:
    """Split an M4 bivector into commuting simple planes.

    ``(b^b)^2 != 0``: two finite axes (one proper, one improper) from the
    quadratic for their squares.  ``(b^b)^2 = 0``, ``b.b != 0``: finite axis
    plus axis at infinity.  Both zero: a non-unique null split when
    ``b^3 = 0``, otherwise irreducible.
    """
    if b.sig != M4 or b.grade not in (2, 0):
        raise UsageError("decompose_bivector_m4 needs an M4 bivector")
    zero = b.sig.zero()
    if is_simple(b):
        return BivectorDecomposition(b, zero, "simple")
    s2 = _sumsq(b)
    w = wedge(b, b)
    w2 = geometric_product(w, w).scalar_part()
    dd = inner(b, b).scalar_part()
    if not _negligible(w2, s2 * s2):
        disc = math.sqrt(dd * dd - w2)
        # the root of larger magnitude gives the better conditioned factor;
        # the other axis is the remainder so that the parts sum exactly
        sq = 0.5 * (dd + disc) if dd >= 0 else 0.5 * (dd - disc)
        num = geometric_product(w * (-0.5 / sq) + 1.0, b)
        first = (num / (1.0 - 0.25 * w2 / (sq * sq))).grade_select(2)
        parts = sorted((first, b - first), key=lambda p: p.square())
        return BivectorDecomposition(parts[0], parts[1], "two_finite_axes")
    if not _negligible(dd, s2):
        f = w * (0.5 / dd)
        part2 = geometric_product(f, b).grade_select(2)
        return BivectorDecomposition(b - part2, part2, "finite_plus_infinity")
    if not _cube_is_zero(b):
        return BivectorDecomposition(b, zero, "irreducible")
    split = split_by_centralizer(b)
    if split is None:
        return BivectorDecomposition(b, zero, "irreducible")
    return BivectorDecomposition(split[0], split[1], "null_nonunique")


def decompose_trivector_m4(t: Multivector) -> BivectorDecomposition:
    """Split an M4 trivector into a finite line and a line at infinity.

    Trivectors at infinity ``e0 ^ pi`` split through the planes of ``pi``.
    """
    if t.sig != M4 or t.grade not in (3, 0):
        raise UsageError("decompose_trivector_m4 needs an M4 trivector")
    zero = t.sig.zero()
    if is_simple(t):
        return BivectorDecomposition(t, zero, "simple")
    dd = inner(t, t).scalar_part()
    if not _negligible(dd, _sumsq(t)):
        f = geometric_product(regressive_join(t, t), t.sig.I) * (0.5 / dd)
        ic = geometric_product(f, t).grade_select(3)
        return BivectorDecomposition(t - ic, ic, "finite_plus_infinity")
    if is_at_infinity(t):
        inner_planes = decompose_bivector_m4(t.strip_e0())
        if inner_planes.regime in ("two_finite_axes", "finite_plus_infinity", "null_nonunique"):
            e0 = t.sig.blade("e0")
            return BivectorDecomposition(
                wedge(e0, inner_planes.part1), wedge(e0, inner_planes.part2), "two_at_infinity"
            )
    return BivectorDecomposition(t, zero, "irreducible")


def decomposition_ok(x: Multivector, d: BivectorDecomposition, tol: float = 1e-9) -> bool:
    """Sum, simplicity and commutation predicates of a returned split."""
    scale = max(x.scale_of(), 1e-300)
    p1, p2 = d.part1, d.part2
    if not (p1 + p2).allclose(x, rtol=tol, atol=tol * scale):
        return False
    for p in (p1, p2):
        if p.scale_of() > 0 and not is_simple(p):
            return False
    return commutator(p1, p2).scale_of() <= tol * scale**2


# ---------------------------------------------------------------- irreducible action


def _check_irreducible_null(eta: Multivector) -> None:
    if eta.sig not in (M3, M4) or eta.grade != 2:
        raise UsageError("irreducible null generators are M3/M4 bivectors")
    s2 = _sumsq(eta)
    w = wedge(eta, eta)
    if not _negligible(inner(eta, eta).scalar_part(), s2):
        raise UsageError("generator is not null (eta . eta != 0)")
    if w.scale_of() <= 1e-9 * s2:
        raise UsageError("generator is simple (eta ^ eta = 0)")
    if eta.sig == M4 and not _negligible(geometric_product(w, w).scalar_part(), s2 * s2):
        raise UsageError("(eta ^ eta)^2 != 0")
    if _cube_is_zero(eta):
        raise UsageError("eta^3 = 0: the generator is reducible")


def irreducible_null_action(eta: Multivector, theta: float, p: Multivector) -> Multivector:
    """Closed-form action of ``exp(-theta/2 eta)`` on ``P``, cubic in ``theta``."""
    _check_irreducible_null(eta)
    pe = commutator(p, eta)
    epe = geometric_product(geometric_product(eta, p), eta)
    pe3 = commutator(p, cube(eta))
    out = p + pe * theta - epe * (0.25 * theta**2) - pe3 * (theta**3 / 12.0)
    return _keep_role(out.grade_select(p.grade) if p.grade is not None else out, p)


# ---------------------------------------------------------------- motion classification


@dataclass(frozen=True)
class MotionDescriptor:
    """Proper motion generated by ``exp(A)`` with ``-2A = theta1 axis1 [+ theta2 axis2]``.

    For translations ``-2A = lam e0 ^ direction``.  For null axes the axes
    keep the caller's weight (``theta1 = 1``) and ``theta_renormalized`` is the
    angle after rescaling the axis so its time-axis coefficient is one.
    """

    kind: str
    axes: tuple[Multivector, ...] = ()
    theta1: float | None = None
    theta2: float | None = None
    lam: float | None = None
    direction: Multivector | None = None
    boost: bool = False
    subkind: str | None = None
    theta_renormalized: float | None = None

    def __str__(self) -> str:
        bits = [self.kind]
        if self.subkind:
            bits.append(self.subkind)
        if self.boost:
            bits.append("boost")
        for name in ("theta1", "theta2", "lam"):
            v = getattr(self, name)
            if v is not None:
                bits.append(f"{name}={v:.12g}")
        return ", ".join(bits)


_TIME_BLADE = {"M2": "e12", "M3": "e12", "M4": "e12"}
_TIME_VECTOR = {"M3": "e3", "M4": "e4"}


def _rotation_kind(axis: Multivector) -> str:
    k = metric_kind(as_entity(axis))
    return {"proper": "elliptic_rotation", "improper": "hyperbolic_rotation", "null": "parabolic_rotation"}[k]


def _is_boost_axis(axis: Multivector) -> bool:
    tag = axis.sig.space_tag
    if tag == "M2":
        return True
    return _boost_axis_ok(axis, _TIME_VECTOR[tag])


def _is_euclidean_axis(axis: Multivector) -> bool:
    tag = axis.sig.space_tag
    if tag == "M2":
        return False
    return inner(axis.sig.blade(_TIME_VECTOR[tag]), axis).is_zero(axis.scale_of())


def _simple_descriptor(g: Multivector) -> MotionDescriptor:
    """``g = -2A`` simple."""
    if is_at_infinity(g):
        a = g.strip_e0()
        kind = metric_kind(as_entity(a)) if a.grade == 1 else None
        if kind in ("proper", "improper"):
            lam = a.norm()
            return MotionDescriptor("translation", lam=lam, direction=a / lam, subkind=kind)
        return MotionDescriptor("translation", lam=1.0, direction=a, subkind="null")
    if g.sig == M2:
        theta = g.norm()
        return MotionDescriptor("hyperbolic_rotation", (g / theta,), theta1=theta, boost=True)
    kind = _rotation_kind(g)
    if kind == "parabolic_rotation":
        t = g.sig.blade(_TIME_BLADE[g.sig.space_tag])
        w = inner(g, t).scalar_part() / t.square()
        return MotionDescriptor(kind, (g,), theta1=1.0, theta_renormalized=(w if w != 0 else None))
    theta = g.norm()
    axis = g / theta
    if kind == "elliptic_rotation" and _is_euclidean_axis(axis):
        return MotionDescriptor("euclidean_rotation", (axis,), theta1=theta, subkind="elliptic_rotation")
    boost = kind == "hyperbolic_rotation" and _is_boost_axis(axis)
    return MotionDescriptor(kind, (axis,), theta1=theta, boost=boost)


def classify_motion(a: Multivector) -> MotionDescriptor:
    """Classify the motion generated by ``exp(A)`` for a bivector ``A``."""
    if a.grade != 2:
        raise UsageError("classify_motion needs a non-zero bivector generator")
    g = a * -2.0
    tag = g.sig.space_tag
    if tag == "M2" or is_simple(g):
        return _simple_descriptor(g)
    d = decompose_bivector_m3(g) if tag == "M3" else decompose_bivector_m4(g)
    if d.regime == "irreducible":
        return MotionDescriptor("irreducible_null", (g,), theta1=1.0)
    if d.regime == "null_nonunique":
        return MotionDescriptor("null_degenerate", (d.part1, d.part2), theta1=1.0, theta2=1.0)
    if d.regime == "finite_plus_infinity":
        theta = d.part1.norm()
        axis = d.part1 / theta
        ia = geometric_product(axis.sig.I, axis)
        lam = -float(np.dot(d.part2.coeffs, ia.coeffs) / np.dot(ia.coeffs, ia.coeffs))
        return MotionDescriptor("screw", (axis,), theta1=theta, lam=lam, subkind=_rotation_kind(axis))
    # two finite axes: part1 proper, part2 improper
    t1, t2 = d.part1.norm(), d.part2.norm()
    s1, s2 = d.part1 / t1, d.part2 / t2
    lox = _is_euclidean_axis(s1) and _is_boost_axis(s2)
    return MotionDescriptor("loxodromic" if lox else "double_rotation", (s1, s2), theta1=t1, theta2=t2, boost=lox)


# ---------------------------------------------------------------- orbits


def unit_axis(axis: Multivector) -> Multivector:
    """Normalise a simple finite non-null axis; anything else is returned as given."""
    if axis.grade == 2 and is_simple(axis) and not is_at_infinity(axis):
        if metric_kind(as_entity(axis)) in ("proper", "improper"):
            return axis.normalized()
    return axis


def orbit(axis: Multivector, x: Multivector, theta_from: float, theta_to: float, steps: int) -> list[tuple[float, Multivector]]:
    """Samples of ``exp(-theta/2 * axis) X exp(theta/2 * axis)`` on a uniform grid."""
    if steps < 2:
        raise UsageError("orbit needs at least 2 steps")
    u = unit_axis(axis)
    out = []
    for theta in np.linspace(theta_from, theta_to, steps):
        s = exp_bivector(u * (-0.5 * float(theta)))
        out.append((float(theta), apply(s, x)))
    return out
