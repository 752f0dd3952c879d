"""Hot loops, in a numba flavour and a pure-numpy flavour.

The active flavour is chosen by the SCHURDIST_BACKEND environment variable
("numba" or "numpy"); numba is used by default when it imports cleanly.
Both flavours are always importable as NUMPY_KERNELS / NUMBA_KERNELS so the
benchmark and the tests can compare them.
"""

import os
from types import SimpleNamespace

import numpy as np


# pure numpy ---------------------------------------------------------------

def _couple_np(old, p0, c0, p1, c1):
    """out[r] = c0[r]*old[p0[r],0] + c1[r]*old[p1[r],1]; a parent of -1 means absent.

    old has shape (R, 2, M); the result has shape (len(p0), M).
    """
    R, _, M = old.shape
    out = np.zeros((len(p0), M), dtype=np.result_type(old.dtype, c0.dtype))
    m0 = p0 >= 0
    if m0.any():
        out[m0] += c0[m0, None] * old[p0[m0], 0, :]
    m1 = p1 >= 0
    if m1.any():
        out[m1] += c1[m1, None] * old[p1[m1], 1, :]
    return out


def _kron_scan_np(n):
    """Kronecker coefficients of every two-row triplet of S_n from the closed formula."""
    h = n // 2
    a, b, c = np.meshgrid(np.arange(h + 1), np.arange(h + 1), np.arange(h + 1), indexing="ij")
    lam = a + b + c
    mx = np.maximum(np.maximum(a, b), c)
    mn = np.minimum(np.minimum(a, b), c)
    y = (lam - 2 * mx) // 2
    g = np.zeros_like(a)
    for k in range(h // 2 + 1):
        g += ((k <= mn // 2) & (k <= y) & (n - lam + 2 * k >= 0)).astype(a.dtype)
    return g


NUMPY_KERNELS = SimpleNamespace(name="numpy", couple=_couple_np, kron_scan=_kron_scan_np)


# numba --------------------------------------------------------------------

def _build_numba():
    from numba import njit

    @njit(cache=False)
    def _couple_real(old, p0, c0, p1, c1):
        R, _, M = old.shape
        out = np.zeros((p0.shape[0], M), dtype=old.dtype)
        for r in range(p0.shape[0]):
            a, b = p0[r], p1[r]
            if a >= 0:
                w = c0[r]
                for k in range(M):
                    out[r, k] += w * old[a, 0, k]
            if b >= 0:
                w = c1[r]
                for k in range(M):
                    out[r, k] += w * old[b, 1, k]
        return out

    @njit(cache=False)
    def _kron_scan(n):
        h = n // 2
        g = np.zeros((h + 1, h + 1, h + 1), dtype=np.int64)
        for a in range(h + 1):
            for b in range(h + 1):
                for c in range(h + 1):
                    lam = a + b + c
                    mx = max(a, max(b, c))
                    mn = min(a, min(b, c))
                    y = (lam - 2 * mx) // 2
                    cnt = 0
                    for k in range(mn // 2 + 1):
                        if k <= y and n - lam + 2 * k >= 0:
                            cnt += 1
                    g[a, b, c] = cnt
        return g

    def couple(old, p0, c0, p1, c1):
        if np.iscomplexobj(old):
            re = _couple_real(np.ascontiguousarray(old.real), p0, c0, p1, c1)
            im = _couple_real(np.ascontiguousarray(old.imag), p0, c0, p1, c1)
            return re + 1j * im
        return _couple_real(np.ascontiguousarray(old, dtype=np.float64), p0, c0, p1, c1)

    return SimpleNamespace(name="numba", couple=couple, kron_scan=_kron_scan)


try:
    NUMBA_KERNELS = _build_numba()
    HAS_NUMBA = True
except ImportError:
    NUMBA_KERNELS = None
    HAS_NUMBA = False


def select(name=None):
    name = (name or os.environ.get("SCHURDIST_BACKEND", "")).strip().lower()
    if name == "numpy":
        return NUMPY_KERNELS
    if name in ("", "numba"):
        if HAS_NUMBA:
            return NUMBA_KERNELS
        if name == "numba":
            raise RuntimeError("SCHURDIST_BACKEND=numba but numba is not importable")
        return NUMPY_KERNELS
    raise ValueError(f"unknown SCHURDIST_BACKEND {name!r}")


K = select()
