"""Special-relativity formulas in coordinates (units with c = 1).

Velocities are tuples ``(u_x[, u_y[, u_z]])``; events are ``(x[, y[, z]], t)``.
Everything here is plain arithmetic; the spinor counterparts live in
:mod:`mpga.motions` and the tests check that the two agree.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .algebra import Multivector
from .entities import as_entity, metric_kind
from .errors import ParametrizationError, SuperluminalError, UsageError

Velocity = tuple[float, ...]
Event = tuple[float, ...]


def _vec(v, dim: int | None = None) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=float))
    if a.ndim != 1 or (dim is not None and a.size != dim):
        raise UsageError(f"expected {dim} velocity components, got {a.size}")
    return a


def _speed2(v: np.ndarray) -> float:
    s2 = float(v @ v)
    if not s2 < 1.0:
        raise SuperluminalError(f"|v| = {math.sqrt(s2):.6g} is not below the speed of light")
    return s2


def gamma(v) -> float:
    """Lorentz factor ``(1 - |v|^2)^(-1/2)``; ``v`` is a scalar or a vector."""
    return 1.0 / math.sqrt(1.0 - _speed2(_vec(v)))


def add_velocity_m2(u: float, v: float) -> float:
    """Collinear composition ``(u + v) / (1 + u v)``."""
    _speed2(_vec(u, 1))
    _speed2(_vec(v, 1))
    return (u + v) / (1.0 + u * v)


def boost_velocity(u, v) -> Velocity:
    """Velocity ``u`` seen after a boost with velocity ``v`` (any dimension).

    ``u`` and ``v`` play different roles: the result is not symmetric
    unless the two are collinear.
    """
    u = _vec(u)
    v = _vec(v, u.size)
    _speed2(u)
    _speed2(v)
    g = gamma(v)
    uv = float(u @ v)
    out = (u / g + v + v * uv * g / (g + 1.0)) / (1.0 + uv)
    return tuple(float(c) for c in out)


def boost_velocity_m3(u, v) -> Velocity:
    return boost_velocity(_vec(u, 2), _vec(v, 2))


def boost_velocity_m4(u, v) -> Velocity:
    return boost_velocity(_vec(u, 3), _vec(v, 3))


def lorentz(event: Sequence[float], v) -> Event:
    """Boost of ``(x..., t)`` with velocity ``v``, written with ``gamma``."""
    e = np.asarray(event, dtype=float)
    x, t = e[:-1], float(e[-1])
    v = _vec(v, x.size)
    s2 = _speed2(v)
    if s2 == 0.0:
        return tuple(float(c) for c in e)
    g = 1.0 / math.sqrt(1.0 - s2)
    xv = float(x @ v)
    xp = x + g * t * v + (g - 1.0) * xv * v / s2
    return tuple(float(c) for c in xp) + (g * (t + xv),)


def lorentz_m2(event: Sequence[float], v: float) -> Event:
    return lorentz(_vec(event, 2), [v])


def lorentz_m3(event: Sequence[float], v) -> Event:
    return lorentz(_vec(event, 3), _vec(v, 2))


def lorentz_m4(event: Sequence[float], v) -> Event:
    return lorentz(_vec(event, 4), _vec(v, 3))


def boost_direction(alpha_b: float, beta_b: float | None = None) -> np.ndarray:
    """Unit direction for angle ``alpha_b`` (M3) or angles ``alpha_b, beta_b`` (M4)."""
    if beta_b is None:
        return np.array([math.cos(alpha_b), math.sin(alpha_b)])
    sb = math.sin(beta_b)
    return np.array([math.cos(alpha_b) * sb, math.sin(alpha_b) * sb, math.cos(beta_b)])


def velocity_from_angles(phi: float, alpha: float | None = None, beta: float | None = None) -> Velocity:
    """``tanh(phi)`` along the direction given by the angles (none for M2)."""
    if alpha is None:
        return (math.tanh(phi),)
    return tuple(float(c) for c in boost_direction(alpha, beta) * math.tanh(phi))


def lorentz_rapidity(event: Sequence[float], phi_b: float, alpha_b: float | None = None, beta_b: float | None = None) -> Event:
    """Same boost written with ``cosh``/``sinh`` of the rapidity ``phi_b``."""
    e = np.asarray(event, dtype=float)
    x, t = e[:-1], float(e[-1])
    n = np.ones(1) if alpha_b is None else boost_direction(alpha_b, beta_b)
    if n.size != x.size:
        raise UsageError("angles do not match the event dimension")
    ch, sh = math.cosh(phi_b), math.sinh(phi_b)
    xn = float(x @ n)
    xp = x + t * sh * n + xn * (ch - 1.0) * n
    return tuple(float(c) for c in xp) + (t * ch + xn * sh,)


_LINE_VELOCITY_BLADES = {
    "M2": None,
    "M3": (("e23", "e31"), "e12"),
    "M4": (("e234", "e314", "e124"), "e321"),
}


def line_velocity(line: Multivector) -> Velocity:
    """Velocity of a proper line (worldline), read from its direction part.

    Only the e0-free coefficients enter, so the line need not pass through
    the origin.
    """
    ln = as_entity(line)
    if ln.role != "line" or metric_kind(ln) != "proper":
        raise ParametrizationError("velocity is defined for proper lines only")
    tag = ln.sig.space_tag
    if tag == "M2":
        return (-ln["e2"] / ln["e1"],)
    space_blades, time_blade = _LINE_VELOCITY_BLADES[tag]
    w = ln[time_blade]
    return tuple(ln[b] / w for b in space_blades)
