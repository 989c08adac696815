"""Pure-Python versions of the compiled kernels (same inputs, same outputs)."""
from __future__ import annotations

import numpy as np


def first_nonassociative(table):
    t = table.tolist()
    n = len(t)
    for a in range(n):
        for b in range(n):
            ab = t[a][b]
            row_b = t[b]
            for c in range(n):
                bc = row_b[c]
                lhs = t[ab][c] if ab >= 0 else -1
                rhs = t[a][bc] if bc >= 0 else -1
                if lhs != rhs:
                    return (a, b, c)
    return None


def _gr_mul(x, y, gtab, add_t, mul_t):
    out = [0] * len(x)
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = gtab[i]
        for j, yj in enumerate(y):
            if yj:
                z = row[j]
                out[z] = add_t[out[z]][mul_t[xi][yj]]
    return out


def group_ring_units(add_t, mul_t, gtab, identity, one, total):
    add_t, mul_t, gtab = add_t.tolist(), mul_t.tolist(), gtab.tolist()
    n = len(gtab)
    rsize = len(add_t)
    unit = [0] * n
    unit[identity] = one
    inv = np.full(total, -1, dtype=np.int64)
    for idx in range(total):
        rem, a = idx, []
        for _ in range(n):
            rem, c = divmod(rem, rsize)
            a.append(c)
        prev, x = unit, a
        while True:
            if x == unit:
                enc = 0
                for c in reversed(prev):
                    enc = enc * rsize + c
                inv[idx] = enc
                break
            if _gr_mul(x, x, gtab, add_t, mul_t) == x:
                break
            prev = x
            x = _gr_mul(prev, a, gtab, add_t, mul_t)
    return inv


def sc_mul_pairs(A, B, ptr, ks, cs, add_t, mul_t):
    m, dim = A.shape
    add_t, mul_t = add_t.tolist(), mul_t.tolist()
    ptr, ks, cs = ptr.tolist(), ks.tolist(), cs.tolist()
    out = np.zeros((m, dim), dtype=np.int32)
    for r in range(m):
        a, b = A[r].tolist(), B[r].tolist()
        res = [0] * dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            base = i * dim
            for j, bj in enumerate(b):
                if not bj:
                    continue
                ab = mul_t[ai][bj]
                if not ab:
                    continue
                for t in range(ptr[base + j], ptr[base + j + 1]):
                    k = ks[t]
                    res[k] = add_t[res[k]][mul_t[ab][cs[t]]]
        out[r] = res
    return out
