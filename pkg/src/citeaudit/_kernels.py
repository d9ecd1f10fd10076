"""Edit-distance kernels.

The Levenshtein distance is the one hot inner loop of the engine: it backs
title similarity, consistency checking, author matching, self-citation
analysis, suggestion de-duplication, and the all-pairs shared-author scan of
the network export. Two implementations are provided:

* a numba ``@njit`` kernel (default when numba imports cleanly), and
* a pure-numpy row-scan fallback using a min-plus prefix scan for the
  insertion chain.

Set ``CITEAUDIT_NUMBA=0`` to force the numpy path. ``benchmarks/`` carries a
script comparing both.
"""

from __future__ import annotations

import os

import numpy as np


def _env_wants_numba() -> bool:
    raw = os.environ.get("CITEAUDIT_NUMBA", "1").strip().lower()
    return raw not in ("0", "false", "off", "no")


def _encode(s: str) -> np.ndarray:
    return np.frombuffer(s.encode("utf-32-le"), dtype=np.uint32)


def levenshtein_numpy(a: np.ndarray, b: np.ndarray) -> int:
    """Row-vectorized Levenshtein over codepoint arrays.

    Deletion/substitution are vectorized directly; the insertion recurrence
    curr[j] = min(curr[j], curr[j-1]+1) is resolved with the identity
    min_k<=j (c[k] + (j-k)) = j + min-scan(c - j), i.e. a prefix minimum.
    """
    n, m = a.size, b.size
    if n == 0:
        return m
    if m == 0:
        return n
    idx = np.arange(m + 1, dtype=np.int64)
    prev = idx.copy()
    curr = np.empty(m + 1, dtype=np.int64)
    for i in range(n):
        curr[0] = i + 1
        np.minimum(prev[1:] + 1, prev[:-1] + (b != a[i]), out=curr[1:])
        curr -= idx
        np.minimum.accumulate(curr, out=curr)
        curr += idx
        prev, curr = curr, prev
    return int(prev[m])


def _levenshtein_scalar(a: np.ndarray, b: np.ndarray) -> int:
    # Two-row DP; this body is what numba compiles.
    n, m = a.shape[0], b.shape[0]
    if n == 0:
        return m
    if m == 0:
        return n
    prev = np.empty(m + 1, dtype=np.int64)
    curr = np.empty(m + 1, dtype=np.int64)
    for j in range(m + 1):
        prev[j] = j
    for i in range(n):
        curr[0] = i + 1
        ai = a[i]
        for j in range(1, m + 1):
            cost = 0 if b[j - 1] == ai else 1
            best = prev[j] + 1
            ins = curr[j - 1] + 1
            if ins < best:
                best = ins
            sub = prev[j - 1] + cost
            if sub < best:
                best = sub
            curr[j] = best
        prev, curr = curr, prev
    return int(prev[m])


_NUMBA_KERNEL = None
if _env_wants_numba():
    try:
        from numba import njit

        _NUMBA_KERNEL = njit(cache=True)(_levenshtein_scalar)
    except ImportError:
        _NUMBA_KERNEL = None

BACKEND = "numba" if _NUMBA_KERNEL is not None else "numpy"


def levenshtein(a: str, b: str) -> int:
    """Edit distance between two strings using the active backend."""
    ea, eb = _encode(a), _encode(b)
    if _NUMBA_KERNEL is not None:
        return int(_NUMBA_KERNEL(ea, eb))
    return levenshtein_numpy(ea, eb)


def levenshtein_with_backend(a: str, b: str, backend: str) -> int:
    """Explicit-backend entry point, used by tests and the benchmark."""
    ea, eb = _encode(a), _encode(b)
    if backend == "numba":
        if _NUMBA_KERNEL is None:
            raise RuntimeError("numba backend unavailable")
        return int(_NUMBA_KERNEL(ea, eb))
    if backend == "numpy":
        return levenshtein_numpy(ea, eb)
    if backend == "python":
        return _levenshtein_scalar(ea, eb)
    raise ValueError(f"unknown backend: {backend}")
