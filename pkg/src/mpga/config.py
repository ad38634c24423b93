"""Numerical tolerances shared by classification and validation."""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-9
    abs: float = 1e-12


_current = Tolerances()


def get_tolerances() -> Tolerances:
    return _current


def set_tolerance(rel: float | None = None, abs: float | None = None) -> Tolerances:
    """Replace the process-wide tolerances; returns the previous value."""
    global _current
    prev = _current
    changes = {k: v for k, v in (("rel", rel), ("abs", abs)) if v is not None}
    for v in changes.values():
        if not v >= 0:
            raise ValueError("tolerances must be non-negative")
    _current = replace(_current, **changes)
    return prev


@contextmanager
def tolerance(rel: float | None = None, abs: float | None = None):
    prev = set_tolerance(rel, abs)
    try:
        yield get_tolerances()
    finally:
        global _current
        _current = prev
