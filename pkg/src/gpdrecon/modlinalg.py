"""Exact linear algebra over finite rings ``Z/n`` and products of them.

Systems are split into their ``Z/p^k`` components.  Each local ring is a chain
ring, so a pivot of minimal ``p``-adic valuation divides every other entry and
Smith normal form goes through with ordinary row/column operations.
"""
from __future__ import annotations

from .coeff_ring import LocalComponent, Ring


def _valuation(a: int, p: int, q: int) -> int:
    a %= q
    if a == 0:
        raise ValueError("valuation of zero")
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


class LocalSNF:
    """``U @ A @ V = diag(p^v_0, ..., p^v_{r-1}, 0, ...)`` over ``Z/q``, ``q = p^k``."""

    def __init__(self, A: list[list[int]], ncols: int, p: int, k: int):
        q = p**k
        m, n = len(A), ncols
        A = [[x % q for x in row] for row in A]
        U = [[int(i == j) for j in range(m)] for i in range(m)]
        V = [[int(i == j) for j in range(n)] for i in range(n)]
        vals = []
        r = 0
        while r < min(m, n):
            best = None
            for i in range(r, m):
                row = A[i]
                for j in range(r, n):
                    if row[j]:
                        v = _valuation(row[j], p, q)
                        if best is None or v < best[0]:
                            best = (v, i, j)
                            if v == 0:
                                break
                if best is not None and best[0] == 0:
                    break
            if best is None:
                break
            v, i, j = best
            A[r], A[i] = A[i], A[r]
            U[r], U[i] = U[i], U[r]
            if j != r:
                for row in A:
                    row[r], row[j] = row[j], row[r]
                for row in V:
                    row[r], row[j] = row[j], row[r]
            pv = p**v
            unit = (A[r][r] // pv) % q
            uinv = pow(unit, -1, q)
            A[r] = [(x * uinv) % q for x in A[r]]
            U[r] = [(x * uinv) % q for x in U[r]]
            for i2 in range(m):
                if i2 != r and A[i2][r]:
                    t = A[i2][r] // pv
                    A[i2] = [(x - t * y) % q for x, y in zip(A[i2], A[r])]
                    U[i2] = [(x - t * y) % q for x, y in zip(U[i2], U[r])]
            for j2 in range(r + 1, n):
                if A[r][j2]:
                    t = A[r][j2] // pv
                    for row in A:
                        row[j2] = (row[j2] - t * row[r]) % q
                    for row in V:
                        row[j2] = (row[j2] - t * row[r]) % q
            vals.append(v)
            r += 1
        self.p, self.k, self.q = p, k, q
        self.m, self.n = m, n
        self.U, self.V = U, V
        self.vals = vals
        self.rank = r

    def solve(self, b: list[int]) -> list[int] | None:
        q, p = self.q, self.p
        c = [sum(u * x for u, x in zip(row, b)) % q for row in self.U]
        y = [0] * self.n
        for i, v in enumerate(self.vals):
            pv = p**v
            if c[i] % pv:
                return None
            y[i] = (c[i] // pv) % (q // pv)
        if any(c[i] for i in range(self.rank, self.m)):
            return None
        return [sum(V_row[j] * y[j] for j in range(self.n)) % q for V_row in self.V]

    def kernel(self) -> list[list[int]]:
        q, p, k = self.q, self.p, self.k
        gens = []
        for j in range(self.n):
            if j < self.rank:
                v = self.vals[j]
                if v == 0:
                    continue
                scale = p ** (k - v)
            else:
                scale = 1
            gens.append([(row[j] * scale) % q for row in self.V])
        return gens


def _split(ring: Ring, A, b=None):
    for comp in ring.components:
        Ac = [[ring.project(x, comp) for x in row] for row in A]
        bc = None if b is None else [ring.project(x, comp) for x in b]
        yield comp, Ac, bc


def solve(ring: Ring, A: list[list[int]], b: list[int], ncols: int) -> list[int] | None:
    """One solution of ``A x = b`` (free coordinates set to zero), or ``None``."""
    parts: dict[LocalComponent, list[int]] = {}
    for comp, Ac, bc in _split(ring, A, b):
        if not Ac:
            if any(bc):
                return None
            parts[comp] = [0] * ncols
            continue
        x = LocalSNF(Ac, ncols, comp.p, comp.k).solve(bc)
        if x is None:
            return None
        parts[comp] = x
    return [ring.lift({c: parts[c][j] for c in parts}) for j in range(ncols)]


def kernel(ring: Ring, A: list[list[int]], ncols: int) -> list[list[int]]:
    """Generators of the submodule ``{x : A x = 0}`` of ``R^ncols``."""
    gens = []
    for comp, Ac, _ in _split(ring, A):
        if not Ac:
            local = [[int(i == j) for i in range(ncols)] for j in range(ncols)]
        else:
            local = LocalSNF(Ac, ncols, comp.p, comp.k).kernel()
        for g in local:
            gens.append([ring.lift({comp: x}) for x in g])
    return gens


def mat_vec(ring: Ring, A: list[list[int]], x: list[int]) -> list[int]:
    return [ring.sum(ring.mul(a, b) for a, b in zip(row, x)) for row in A]


def is_invertible(ring: Ring, A: list[list[int]]) -> bool:
    """Square matrix invertibility: every local SNF has full rank with unit pivots."""
    n = len(A)
    for comp, Ac, _ in _split(ring, A):
        snf = LocalSNF(Ac, n, comp.p, comp.k)
        if snf.rank != n or any(snf.vals):
            return False
    return True


def span_size(ring: Ring, generators: list[list[int]], n: int) -> int:
    """Cardinality of the submodule of ``R^n`` spanned by ``generators``."""
    if not generators:
        return 1
    A = [list(col) for col in zip(*generators)]  # generators as columns
    size = 1
    for comp, Ac, _ in _split(ring, A):
        snf = LocalSNF(Ac, len(generators), comp.p, comp.k)
        for v in snf.vals:
            size *= comp.p ** (comp.k - v)
    return size
