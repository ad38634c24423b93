"""Text rendering of multivectors in the conventional blade names of each space."""
from __future__ import annotations

import numpy as np

from .algebra import Multivector, Signature, blade_from_indices, blade_indices

_DISPLAY_NAMES = {
    "M2": ["e0", "e1", "e2", "e12", "e20", "e01", "e012"],
    "M3": [
        "e0", "e1", "e2", "e3",
        "e23", "e31", "e12", "e10", "e20", "e30",
        "e123", "e320", "e130", "e210",
        "e0123",
    ],
    "M4": [
        "e0", "e1", "e2", "e3", "e4",
        "e23", "e31", "e12", "e41", "e42", "e43", "e10", "e20", "e30", "e40",
        "e234", "e314", "e124", "e321", "e230", "e310", "e120", "e410", "e420", "e430",
        "e1234", "e2340", "e3140", "e1240", "e3210",
        "e01234",
    ],
}


def blade_names(sig: Signature) -> list[tuple[int, str, int]]:
    """``(mask, name, sign)`` triples in display order; display coefficient is
    ``sign * canonical coefficient``."""
    names = _DISPLAY_NAMES.get(sig.space_tag)
    if names is None:
        out = []
        for mask in sorted(range(1, sig.size), key=lambda m: (bin(m).count("1"), m)):
            out.append((mask, "e" + "".join(str(i) for i in blade_indices(mask)), 1))
        return out
    out = []
    for name in names:
        sign, mask = blade_from_indices([int(ch) for ch in name[1:]], sig.n)
        out.append((mask, name, sign))
    return out


def fmt(x: float, digits: int = 12) -> str:
    s = f"{x:.{digits}g}"
    return "0" if s in ("-0", "0") else s


def render(mv: Multivector, digits: int = 12) -> str:
    """Render like ``1 - 0.5*e20``; coefficients use ``digits`` significant digits."""
    c = mv.coeffs
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    cut = 1e-13 * scale
    terms: list[tuple[float, str]] = []
    if abs(c[0]) > cut:
        terms.append((float(c[0]), ""))
    for mask, name, sign in blade_names(mv.sig):
        v = float(sign * c[mask])
        if abs(v) > cut:
            terms.append((v, name))
    if not terms:
        return "0"
    parts = []
    for k, (v, name) in enumerate(terms):
        mag = fmt(abs(v), digits)
        if name:
            body = name if mag == "1" else f"{mag}*{name}"
        else:
            body = mag
        if k == 0:
            parts.append(f"-{body}" if v < 0 else body)
        else:
            parts.append(("- " if v < 0 else "+ ") + body)
    return " ".join(parts)
