"""Backend selection for the hot loops.

The compiled extension ``_kernels`` is used when it was built; otherwise, or
when ``GPDRECON_PURE=1`` is set, the pure-Python ``_fallback`` is used.  Both
take the same arguments and return identical results.
"""
from __future__ import annotations

import os

import numpy as np

from . import _fallback

_compiled = None
if os.environ.get("GPDRECON_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def set_backend(name: str) -> None:
    """Switch the process-wide default backend."""
    global BACKEND
    if name not in available_backends():
        raise ValueError(f"backend {name!r} is not available")
    BACKEND = name


def _impl(name: str, backend: str | None):
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return getattr(_compiled, name)
    return getattr(_fallback, name)


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def first_nonassociative(table, backend=None):
    table = np.ascontiguousarray(table, dtype=np.int32)
    return _impl("first_nonassociative", backend)(table)


def group_ring_units(ring, gtable, identity: int, total: int, backend=None):
    """For every encoded element of ``R[G]`` the encoded inverse, or ``-1``."""
    add_t, mul_t = ring.tables
    gtable = np.ascontiguousarray(gtable, dtype=np.int32)
    return _impl("group_ring_units", backend)(add_t, mul_t, gtable, identity, ring.one, total)


class SparseConstants:
    """Structure constants in CSR form: ``e_i e_j = sum_t cs[t] e_{ks[t]}``."""

    def __init__(self, dim: int, triples):
        buckets: dict[int, list[tuple[int, int]]] = {}
        for i, j, k, c in triples:
            if c:
                buckets.setdefault(i * dim + j, []).append((k, c))
        ptr = [0]
        ks, cs = [], []
        for pij in range(dim * dim):
            for k, c in sorted(buckets.get(pij, ())):
                ks.append(k)
                cs.append(c)
            ptr.append(len(ks))
        self.dim = dim
        self.ptr = np.array(ptr, dtype=np.int64)
        self.ks = np.array(ks, dtype=np.int32)
        self.cs = np.array(cs, dtype=np.int32)


def sc_mul_pairs(A, B, sc: SparseConstants, ring, backend=None):
    """Row-wise products ``A[r] * B[r]`` in the algebra with constants ``sc``."""
    add_t, mul_t = ring.tables
    A = np.ascontiguousarray(A, dtype=np.int32).reshape(-1, sc.dim)
    B = np.ascontiguousarray(B, dtype=np.int32).reshape(-1, sc.dim)
    return _impl("sc_mul_pairs", backend)(A, B, sc.ptr, sc.ks, sc.cs, add_t, mul_t)
