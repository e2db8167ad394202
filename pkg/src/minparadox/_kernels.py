"""Bitmask kernels for schema validity over full models.

A formula is compiled to a straight-line program (children before parents).
Each node evaluates to a ``uint64`` mask of the worlds forcing it; an
implication node keeps world ``u`` iff ``up[u] & A & ~B == 0``.  The kernel
scans every assignment of upsets to the variables (first variable slowest)
and returns the index of the first assignment whose root mask is not full,
or ``-1``.

Two interchangeable backends: a numba ``@njit`` loop and a chunked numpy
vectorization.  Set ``MINPARADOX_DISABLE_NUMBA=1`` to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

OP_VAR, OP_BOT, OP_AND, OP_OR, OP_IMP = 0, 1, 2, 3, 4

MAX_WORLDS = 63

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

_DISABLED = os.environ.get("MINPARADOX_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}


def default_backend() -> str:
    return "numba" if HAVE_NUMBA and not _DISABLED else "numpy"


def available_backends() -> list[str]:
    return ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]


def _first_failure_py(ops, lhs, rhs, up, q_mask, upsets, nvars):
    n = up.shape[0]
    full = np.uint64((1 << n) - 1)
    one = np.uint64(1)
    m = upsets.shape[0]
    nnodes = ops.shape[0]
    vals = np.zeros(nnodes, dtype=np.uint64)
    digits = np.zeros(max(nvars, 1), dtype=np.int64)
    total = 1
    for _ in range(nvars):
        total *= m
    for idx in range(total):
        for k in range(nnodes):
            op = ops[k]
            if op == 0:
                vals[k] = upsets[digits[lhs[k]]]
            elif op == 1:
                vals[k] = q_mask
            elif op == 2:
                vals[k] = vals[lhs[k]] & vals[rhs[k]]
            elif op == 3:
                vals[k] = vals[lhs[k]] | vals[rhs[k]]
            else:
                bad = vals[lhs[k]] & ~vals[rhs[k]]
                r = np.uint64(0)
                for u in range(n):
                    if up[u] & bad == 0:
                        r |= one << np.uint64(u)
                vals[k] = r
        if vals[nnodes - 1] != full:
            return idx
        j = nvars - 1
        while j >= 0:
            digits[j] += 1
            if digits[j] < m:
                break
            digits[j] = 0
            j -= 1
    return -1


if HAVE_NUMBA:
    _first_failure_numba = njit(cache=True, nogil=True)(_first_failure_py)
else:  # pragma: no cover
    _first_failure_numba = None


def _first_failure_numpy(ops, lhs, rhs, up, q_mask, upsets, nvars, chunk=1 << 15):
    n = up.shape[0]
    full = np.uint64((1 << n) - 1)
    m = upsets.shape[0]
    total = m**nvars
    shape = (m,) * nvars
    shifts = [np.uint64(u) for u in range(n)]
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        digits = np.unravel_index(idx, shape) if nvars else ()
        vals: list[np.ndarray] = []
        for k in range(ops.shape[0]):
            op = ops[k]
            if op == OP_VAR:
                v = upsets[digits[lhs[k]]]
            elif op == OP_BOT:
                v = np.full(idx.shape, q_mask, dtype=np.uint64)
            elif op == OP_AND:
                v = vals[lhs[k]] & vals[rhs[k]]
            elif op == OP_OR:
                v = vals[lhs[k]] | vals[rhs[k]]
            else:
                bad = vals[lhs[k]] & ~vals[rhs[k]]
                v = np.zeros(idx.shape, dtype=np.uint64)
                for u in range(n):
                    v |= ((up[u] & bad) == 0).astype(np.uint64) << shifts[u]
            vals.append(np.broadcast_to(v, idx.shape))
        failing = np.flatnonzero(vals[-1] != full)
        if failing.size:
            return int(idx[failing[0]])
    return -1


def first_failure(program, up, q_mask, upsets, nvars, backend: str | None = None) -> int:
    """Index of the first failing assignment, or -1 when all assignments pass."""
    ops, lhs, rhs = program
    if up.shape[0] > MAX_WORLDS:
        raise ValueError(f"bitmask kernels support at most {MAX_WORLDS} worlds")
    backend = backend or default_backend()
    args = (ops, lhs, rhs, up, np.uint64(q_mask), upsets, nvars)
    if backend == "numba":
        if _first_failure_numba is None:  # pragma: no cover
            raise RuntimeError("numba backend requested but numba is not importable")
        return int(_first_failure_numba(*args))
    if backend == "numpy":
        return _first_failure_numpy(*args)
    if backend == "python":
        return int(_first_failure_py(*args))
    raise ValueError(f"unknown backend {backend!r}")
