"""Dense product kernels.

Every bilinear product in the package reduces to one scatter-add over a
(N x N) sign table, where N = 2**n is the number of basis blades and the
result blade of blade pair (i, j) is always ``i ^ j``.  Two interchangeable
implementations are provided:

* a numba ``@njit`` loop (default when numba imports), and
* a pure numpy path (``bincount`` for one product, a scatter matmul for
  batches).

Set ``MPGA_BACKEND=numpy`` in the environment to force the numpy path, or
``MPGA_BACKEND=numba`` to require numba.
"""
from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("MPGA_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ImportError(f"MPGA_BACKEND must be auto, numba or numpy, got {_requested!r}")

try:
    if _requested == "numpy":
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    if _requested == "numba":
        raise
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _product_numpy(a, b, sign):
    n = a.shape[0]
    w = np.multiply.outer(a, b) * sign
    return np.bincount(_xor_index(n), weights=w.ravel(), minlength=n)


def _product_batch_numpy(a, b, sign):
    n = a.shape[1]
    w = (a[:, :, None] * b[:, None, :] * sign).reshape(a.shape[0], n * n)
    return w @ _scatter_matrix(n)


_XOR_CACHE: dict[int, np.ndarray] = {}
_SCATTER_CACHE: dict[int, np.ndarray] = {}


def _xor_index(n):
    idx = _XOR_CACHE.get(n)
    if idx is None:
        r = np.arange(n)
        idx = np.bitwise_xor.outer(r, r).ravel()
        _XOR_CACHE[n] = idx
    return idx


def _scatter_matrix(n):
    m = _SCATTER_CACHE.get(n)
    if m is None:
        m = np.zeros((n * n, n))
        m[np.arange(n * n), _xor_index(n)] = 1.0
        _SCATTER_CACHE[n] = m
    return m


if HAVE_NUMBA:

    @njit(cache=True)
    def _product_numba(a, b, sign):
        n = a.shape[0]
        out = np.zeros(n)
        for i in range(n):
            ai = a[i]
            if ai == 0.0:
                continue
            for j in range(n):
                s = sign[i, j]
                if s != 0.0 and b[j] != 0.0:
                    out[i ^ j] += s * ai * b[j]
        return out

    @njit(cache=True)
    def _product_batch_numba(a, b, sign):
        m, n = a.shape
        out = np.zeros((m, n))
        for k in range(m):
            for i in range(n):
                ai = a[k, i]
                if ai == 0.0:
                    continue
                for j in range(n):
                    s = sign[i, j]
                    if s != 0.0:
                        out[k, i ^ j] += s * ai * b[k, j]
        return out


def product(a: np.ndarray, b: np.ndarray, sign: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Bilinear product of two dense coefficient vectors under ``sign``."""
    if (backend or BACKEND) == "numba":
        return _product_numba(a, b, sign)
    return _product_numpy(a, b, sign)


def product_batch(a: np.ndarray, b: np.ndarray, sign: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Row-wise product of two (m, N) coefficient stacks."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if (backend or BACKEND) == "numba":
        return _product_batch_numba(a, b, sign)
    return _product_batch_numpy(a, b, sign)


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAVE_NUMBA else ("numpy",)
