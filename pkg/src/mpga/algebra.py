"""Signature-generic multivector arithmetic.

Blades are stored by bitmask in ascending index order (bit ``i`` set means
``e_i`` is a factor), so ``e20`` in display notation is stored as ``-e02``.
Coefficient vectors are dense, of length ``2**n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from . import _kernels
from .config import get_tolerances
from .errors import NotInvertible, SignatureMismatch, UsageError

Scalar = Union[int, float, np.floating, np.integer]


# ---------------------------------------------------------------- signatures


@dataclass(frozen=True)
class Signature:
    """Metric of one of the supported spaces; ``squares[i]`` is ``e_i**2``."""

    squares: tuple[int, ...]
    space_tag: str

    def __post_init__(self):
        if any(s not in (-1, 0, 1) for s in self.squares):
            raise UsageError(f"basis squares must be 0, +1 or -1: {self.squares}")

    @property
    def n(self) -> int:
        return len(self.squares)

    @property
    def size(self) -> int:
        return 1 << len(self.squares)

    @property
    def tables(self) -> "_Tables":
        return _tables(self.squares)

    def blade(self, name: str | Sequence[int], coef: float = 1.0) -> "Multivector":
        """Basis blade by display name (``"e320"``) or index sequence."""
        indices = _parse_blade_name(name) if isinstance(name, str) else list(name)
        sign, mask = blade_from_indices(indices, self.n)
        out = np.zeros(self.size)
        out[mask] = sign * coef
        return Multivector(self, out)

    def scalar(self, value: float) -> "Multivector":
        out = np.zeros(self.size)
        out[0] = value
        return Multivector(self, out)

    def zero(self) -> "Multivector":
        return Multivector(self, np.zeros(self.size))

    @property
    def I(self) -> "Multivector":
        """Pseudoscalar ``e0 e1 ... e_{n-1}``."""
        return self.blade(range(self.n))

    def vector(self, coords: Sequence[float]) -> "Multivector":
        if len(coords) != self.n:
            raise UsageError(f"expected {self.n} vector coordinates, got {len(coords)}")
        out = np.zeros(self.size)
        for i, c in enumerate(coords):
            out[1 << i] = c
        return Multivector(self, out)

    def __repr__(self) -> str:
        return f"Signature({self.space_tag}, {self.squares})"


M2 = Signature((0, 1, -1), "M2")
M3 = Signature((0, 1, 1, -1), "M3")
M4 = Signature((0, 1, 1, 1, -1), "M4")
SPACES = {"M2": M2, "M3": M3, "M4": M4}


def space(tag: str) -> Signature:
    try:
        return SPACES[tag.upper()]
    except KeyError:
        raise UsageError(f"unknown space {tag!r}; expected one of M2, M3, M4") from None


def euclidean_oracle(sig: Signature) -> Signature:
    """Same layout as ``sig`` with every -1 replaced by +1 (test oracle only)."""
    return Signature(tuple(1 if s == -1 else s for s in sig.squares), "EuclideanOracle")


# ---------------------------------------------------------------- blades


def popcount(x: int) -> int:
    return bin(x).count("1")


def reorder_sign(a: int, b: int) -> int:
    """Sign of moving the factors of blade ``b`` past those of ``a`` into
    ascending order (no metric contraction)."""
    a >>= 1
    swaps = 0
    while a:
        swaps += popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_from_indices(indices: Sequence[int], n: int) -> tuple[int, int]:
    """``(sign, mask)`` such that ``e_{i1} e_{i2} ... = sign * blade(mask)``.

    Indices must be distinct; the sign is the parity of the sorting
    permutation.
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise UsageError(f"repeated index in blade {idx}")
    if any(i < 0 or i >= n for i in idx):
        raise UsageError(f"blade index out of range for {n} basis vectors: {idx}")
    inversions = sum(1 for p in range(len(idx)) for q in range(p + 1, len(idx)) if idx[p] > idx[q])
    mask = 0
    for i in idx:
        mask |= 1 << i
    return (-1 if inversions & 1 else 1), mask


def _parse_blade_name(name: str) -> list[int]:
    if not name.startswith("e") or not name[1:].isdigit():
        raise UsageError(f"not a basis blade name: {name!r}")
    return [int(ch) for ch in name[1:]]


def blade_indices(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True)
class _Tables:
    gp: np.ndarray = field(repr=False)
    wedge: np.ndarray = field(repr=False)
    grade: np.ndarray = field(repr=False)
    reverse: np.ndarray = field(repr=False)
    rc: np.ndarray = field(repr=False)  # right complement signs
    lc: np.ndarray = field(repr=False)  # left complement signs


@lru_cache(maxsize=None)
def _tables(squares: tuple[int, ...]) -> _Tables:
    n = len(squares)
    size = 1 << n
    full = size - 1
    gp = np.zeros((size, size))
    wedge = np.zeros((size, size))
    for a in range(size):
        for b in range(size):
            s = reorder_sign(a, b)
            common = a & b
            for i in range(n):
                if common >> i & 1:
                    s *= squares[i]
            gp[a, b] = s
            if common == 0:
                wedge[a, b] = reorder_sign(a, b)
    grade = np.array([popcount(m) for m in range(size)])
    rev = np.array([-1.0 if (k * (k - 1) // 2) & 1 else 1.0 for k in grade])
    # b ^ rc(b) = +I  and  lc(b) ^ b = +I
    rc = np.array([float(reorder_sign(m, full ^ m)) for m in range(size)])
    lc = np.array([float(reorder_sign(full ^ m, m)) for m in range(size)])
    for arr in (gp, wedge, grade, rev, rc, lc):
        arr.setflags(write=False)
    return _Tables(gp, wedge, grade, rev, rc, lc)


# ---------------------------------------------------------------- multivector


class Multivector:
    """Immutable dense multivector over a :class:`Signature`.

    Operators: ``*`` geometric product, ``^`` wedge, ``|`` inner (homogeneous
    operands only), ``&`` regressive join, ``~`` reverse.
    """

    __slots__ = ("sig", "_c")

    def __init__(self, sig: Signature, coeffs: Iterable[float]):
        c = np.array(coeffs, dtype=np.float64)
        if c.shape != (sig.size,):
            raise UsageError(f"{sig.space_tag} multivectors need {sig.size} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise UsageError("multivector coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "_c", c)

    def __setattr__(self, key, value):
        raise AttributeError("Multivector is immutable")

    # -- basic access

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def __getitem__(self, blade: str | int) -> float:
        """Coefficient of a blade, by display name or canonical mask."""
        if isinstance(blade, str):
            sign, mask = blade_from_indices(_parse_blade_name(blade), self.sig.n)
            return float(sign * self._c[mask])
        return float(self._c[blade])

    def _new(self, coeffs) -> Multivector:
        return Multivector(self.sig, coeffs)

    def _coerce(self, other) -> Multivector | None:
        if isinstance(other, Multivector):
            if other.sig != self.sig:
                raise SignatureMismatch(f"{self.sig.space_tag} vs {other.sig.space_tag}")
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.sig.scalar(float(other))
        return None

    def scale_of(self) -> float:
        return float(np.max(np.abs(self._c))) if self._c.size else 0.0

    def significant(self) -> np.ndarray:
        """Mask of coefficients that are not rounding noise."""
        tol = get_tolerances()
        m = self.scale_of()
        return np.abs(self._c) > max(tol.abs * min(m, 1.0), 1e-12 * m)

    def grades(self) -> set[int]:
        g = self.sig.tables.grade
        return {int(k) for k in g[self.significant()]}

    @property
    def grade(self) -> int | None:
        """Grade of a homogeneous multivector; ``None`` if mixed, 0 if zero."""
        gs = self.grades()
        if not gs:
            return 0
        return gs.pop() if len(gs) == 1 else None

    def is_zero(self, scale: float = 1.0) -> bool:
        tol = get_tolerances()
        return self.scale_of() <= max(tol.abs, tol.rel * scale)

    # -- linear structure

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self._c + o._c)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self._c - o._c)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(o._c - self._c)

    def __neg__(self):
        return self._new(-self._c)

    def __pos__(self):
        return self

    # -- products

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self._new(self._c * float(other))
        o = self._coerce(other)
        return NotImplemented if o is None else geometric_product(self, o)

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self._new(self._c * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            if other == 0:
                raise ZeroDivisionError("division of a multivector by zero")
            return self._new(self._c / float(other))
        o = self._coerce(other)
        return NotImplemented if o is None else geometric_product(self, o.inverse())

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else geometric_product(o, self.inverse())

    def __xor__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else wedge(self, o)

    def __rxor__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else wedge(o, self)

    def __or__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else inner(self, o)

    def __ror__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else inner(o, self)

    def __and__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else regressive_join(self, o)

    def __invert__(self):
        return reverse(self)

    # -- unary helpers

    def grade_select(self, k: int) -> Multivector:
        return grade_select(self, k)

    def reverse(self) -> Multivector:
        return reverse(self)

    def polar(self) -> Multivector:
        return polar(self)

    def complement(self) -> Multivector:
        return complement(self)

    def scalar_part(self) -> float:
        return float(self._c[0])

    def square(self) -> float:
        """Scalar part of ``A*A`` (the metric square of a blade)."""
        return geometric_product(self, self).scalar_part()

    def norm(self) -> float:
        return norm(self)

    def normalized(self) -> Multivector:
        n = norm(self)
        if n <= max(get_tolerances().abs, 1e-9 * float(np.sqrt(np.sum(self._c**2)))):
            raise NotInvertible("cannot normalise a null, zero, or at-infinity object")
        return self / n

    def inverse(self) -> Multivector:
        return inverse(self)

    def e0_free(self) -> Multivector:
        """Part whose blades do not contain ``e0``."""
        mask = (np.arange(self.sig.size) & 1) == 0
        return self._new(np.where(mask, self._c, 0.0))

    def strip_e0(self) -> Multivector:
        """For ``X = e0 ^ Y`` with ``Y`` free of ``e0``, return ``Y``."""
        out = np.zeros(self.sig.size)
        idx = np.arange(self.sig.size)
        has0 = (idx & 1) == 1
        out[idx[has0] ^ 1] = self._c[has0]
        return self._new(out)

    # -- comparison

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self.sig == other.sig and np.array_equal(self._c, other._c)
        if isinstance(other, (int, float)):
            return np.array_equal(self._c, self.sig.scalar(other)._c)
        return NotImplemented

    __hash__ = None

    def allclose(self, other, rtol: float = 1e-9, atol: float = 1e-12) -> bool:
        o = self._coerce(other)
        scale = max(self.scale_of(), o.scale_of(), 1.0)
        return bool(np.max(np.abs(self._c - o._c)) <= atol + rtol * scale)

    def __repr__(self) -> str:
        from .notation import render

        return render(self)

    def __format__(self, spec):
        return repr(self)

    def __iter__(self):
        raise TypeError("Multivector is not iterable; use .coeffs")


# ---------------------------------------------------------------- operations


def _check(a: Multivector, b: Multivector) -> None:
    if a.sig != b.sig:
        raise SignatureMismatch(f"{a.sig.space_tag} vs {b.sig.space_tag}")


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    _check(a, b)
    return Multivector(a.sig, _kernels.product(a.coeffs, b.coeffs, a.sig.tables.gp))


def wedge(a: Multivector, b: Multivector) -> Multivector:
    _check(a, b)
    return Multivector(a.sig, _kernels.product(a.coeffs, b.coeffs, a.sig.tables.wedge))


def grade_select(a: Multivector, k: int) -> Multivector:
    return Multivector(a.sig, np.where(a.sig.tables.grade == k, a.coeffs, 0.0))


def inner(a: Multivector, b: Multivector) -> Multivector:
    """Grade-|r-s| part of ``ab`` for homogeneous ``a`` (grade r), ``b`` (grade s)."""
    _check(a, b)
    r, s = a.grade, b.grade
    if r is None or s is None:
        raise UsageError("inner product needs homogeneous operands; split by grade first")
    return grade_select(geometric_product(a, b), abs(r - s))


def commutator(a: Multivector, b: Multivector) -> Multivector:
    _check(a, b)
    return (geometric_product(a, b) - geometric_product(b, a)) * 0.5


def reverse(a: Multivector) -> Multivector:
    return Multivector(a.sig, a.coeffs * a.sig.tables.reverse)


def polar(a: Multivector) -> Multivector:
    return geometric_product(a, a.sig.I)


def complement(a: Multivector) -> Multivector:
    """Metric-free right complement: blade ``b`` maps to ``c`` with ``b ^ c = I``."""
    t = a.sig.tables
    full = a.sig.size - 1
    out = np.zeros(a.sig.size)
    out[full ^ np.arange(a.sig.size)] = a.coeffs * t.rc
    return Multivector(a.sig, out)


def uncomplement(a: Multivector) -> Multivector:
    """Inverse of :func:`complement` (the left complement)."""
    t = a.sig.tables
    full = a.sig.size - 1
    out = np.zeros(a.sig.size)
    out[full ^ np.arange(a.sig.size)] = a.coeffs * t.lc
    return Multivector(a.sig, out)


def regressive_join(a: Multivector, b: Multivector) -> Multivector:
    """Join (regressive product), independent of the metric."""
    _check(a, b)
    return uncomplement(wedge(complement(a), complement(b)))


def norm(a: Multivector) -> float:
    """``|<A ~A>_0|^(1/2)``; for points this is the weight magnitude ``|w|``."""
    return math.sqrt(abs(geometric_product(a, reverse(a)).scalar_part()))


def _left_matrix(a: Multivector) -> np.ndarray:
    gp = a.sig.tables.gp
    size = a.sig.size
    m = np.zeros((size, size))
    for j in range(size):
        for i in range(size):
            s = gp[i, j]
            if s:
                m[i ^ j, j] += s * a.coeffs[i]
    return m


def inverse(a: Multivector) -> Multivector:
    """Two-sided inverse; raises :class:`NotInvertible` for null or degenerate input."""
    rev = reverse(a)
    aa = geometric_product(a, rev)
    scale = max(a.scale_of() ** 2, 1e-300)
    rest = aa.coeffs.copy()
    rest[0] = 0.0
    if np.max(np.abs(rest)) <= 1e-12 * scale:
        s = aa.scalar_part()
        if abs(s) <= 1e-12 * scale:
            raise NotInvertible("multivector has zero norm")
        return rev / s
    m = _left_matrix(a)
    rhs = np.zeros(a.sig.size)
    rhs[0] = 1.0
    sol, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    x = Multivector(a.sig, sol)
    one = a.sig.scalar(1.0)
    # residual bound scales with |a| |x| (ill-conditioned but invertible input)
    tol = 1e-10 * max(1.0, a.scale_of() * x.scale_of() * a.sig.size)
    if not (geometric_product(a, x).allclose(one, 0.0, tol) and geometric_product(x, a).allclose(one, 0.0, tol)):
        raise NotInvertible("multivector is not invertible")
    return x


def is_simple(a: Multivector) -> bool:
    """``A ^ A = 0`` for even grades; ``A v A = 0`` for odd grades."""
    k = a.grade
    if k is None:
        raise UsageError("simplicity is defined for homogeneous multivectors")
    test = wedge(a, a) if k % 2 == 0 else regressive_join(a, a)
    return test.scale_of() <= 1e-9 * max(a.scale_of() ** 2, 1e-300) + get_tolerances().abs
