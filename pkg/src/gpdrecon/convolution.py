"""Convolution algebras of finite groupoids and their abstract presentations.

Elements of ``R G`` are dense tuples of ring elements indexed by arrows.  An
:class:`AlgebraPresentation` forgets the groupoid: it only keeps a basis,
sparse structure constants, the indices spanning the diagonal, and grades.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import kernels, modlinalg
from .coeff_ring import Ring, parse_ring
from .group_ring import CapacityError, GradingGroup
from .groupoid import (Cocycle, FiniteGroupoid, GroupoidError, GroupoidIso, isotropy_group,
                       isotropy_interior)

BRUTE_CENTRALIZER_CAP = 10**6
FORMAT_VERSION = 1


class PresentationError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


# -- functions on arrows --------------------------------------------------------

def zero(G: FiniteGroupoid) -> tuple[int, ...]:
    return (0,) * G.n_arrows


def char(G: FiniteGroupoid, ring: Ring, U) -> tuple[int, ...]:
    """Characteristic function of an arrow set."""
    U = set(U)
    return tuple(ring.one if a in U else 0 for a in range(G.n_arrows))


def support(f) -> frozenset:
    return frozenset(i for i, v in enumerate(f) if v)


def convolve(G: FiniteGroupoid, ring: Ring, f, g) -> tuple[int, ...]:
    """``(f*g)(γ) = Σ_{d(α)=d(γ)} f(γα⁻¹) g(α)``."""
    out = []
    by_dom: dict[int, list[int]] = {}
    for a in range(G.n_arrows):
        by_dom.setdefault(G.dom[a], []).append(a)
    for c in range(G.n_arrows):
        acc = 0
        for a in by_dom[G.dom[c]]:
            if g[a]:
                x = f[G.mul(c, G.inv[a])]
                if x:
                    acc = ring.add(acc, ring.mul(x, g[a]))
        out.append(acc)
    return tuple(out)


def add(ring: Ring, f, g) -> tuple[int, ...]:
    return tuple(ring.add(a, b) for a, b in zip(f, g))


def scale(ring: Ring, r: int, f) -> tuple[int, ...]:
    return tuple(ring.mul(r, a) for a in f)


def unit_element(G: FiniteGroupoid, ring: Ring) -> tuple[int, ...]:
    """``χ`` of the unit space; a unit for convolution since ``G⁽⁰⁾`` is finite."""
    return char(G, ring, G.unit)


@dataclass
class Submodule:
    """A submodule of ``R^n`` given by generators; ``size`` is its cardinality."""

    ring: Ring
    n: int
    generators: list[list[int]]

    def contains(self, v) -> bool:
        if not any(v):
            return True
        if not self.generators:
            return False
        cols = list(zip(*self.generators))
        A = [list(row) for row in cols]
        return modlinalg.solve(self.ring, A, list(v), len(self.generators)) is not None

    def __le__(self, other: "Submodule") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other) -> bool:
        return isinstance(other, Submodule) and self <= other and other <= self

    @cached_property
    def size(self) -> int:
        return modlinalg.span_size(self.ring, self.generators, self.n)

    def elements(self, cap: int = 10**6) -> set[tuple[int, ...]]:
        if self.size > cap:
            raise CapacityError(f"submodule of size {self.size} exceeds {cap}")
        # every generator has finite additive order, so adding generators reaches the span
        start = tuple([0] * self.n)
        out = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for g in self.generators:
                w = tuple(self.ring.add(a, b) for a, b in zip(v, g))
                if w not in out:
                    out.add(w)
                    frontier.append(w)
        return out


def coordinate_span(ring: Ring, n: int, idx) -> Submodule:
    return Submodule(ring, n, [[ring.one if i == j else 0 for i in range(n)] for j in sorted(idx)])


def diagonal(G: FiniteGroupoid, ring: Ring) -> Submodule:
    return coordinate_span(ring, G.n_arrows, G.unit)


@dataclass
class CentralizerResult:
    linear: Submodule
    isotropy_span: Submodule
    brute: set | None
    agree: bool


def _commutator_matrix(G: FiniteGroupoid, ring: Ring) -> list[list[int]]:
    """Rows express ``f*χ_x - χ_x*f`` for every object ``x``; columns are basis arrows."""
    n = G.n_arrows
    rows: list[list[int]] = []
    for x in range(G.n_objects):
        cx = char(G, ring, [G.unit[x]])
        cols = []
        for a in range(n):
            ea = char(G, ring, [a])
            cols.append([ring.sub(u, v) for u, v in zip(convolve(G, ring, ea, cx),
                                                        convolve(G, ring, cx, ea))])
        rows.extend([list(r) for r in zip(*cols)])
    return rows


def _brute_centralizer(G: FiniteGroupoid, ring: Ring) -> set[tuple[int, ...]]:
    """All ``f`` commuting with every ``χ_x``, by vectorised exhaustion."""
    n = G.n_arrows
    total = ring.size**n
    add_t, mul_t = ring.tables
    neg = np.array([ring.neg(a) for a in range(ring.size)], dtype=np.int32)
    pairs = [(a, b, G.mul(a, b)) for a in range(n) for b in range(n) if G.mul(a, b) >= 0]
    idx = np.arange(total, dtype=np.int64)
    F = np.empty((total, n), dtype=np.int32)
    for i in range(n):
        F[:, i] = idx % ring.size
        idx //= ring.size
    ok = np.ones(total, dtype=bool)
    for x in range(G.n_objects):
        cx = char(G, ring, [G.unit[x]])
        diff = np.zeros((total, n), dtype=np.int32)
        for a, b, ab in pairs:
            if cx[b]:  # f * χ_x
                diff[:, ab] = add_t[diff[:, ab], mul_t[F[:, a], cx[b]]]
            if cx[a]:  # - χ_x * f
                diff[:, ab] = add_t[diff[:, ab], neg[mul_t[cx[a], F[:, b]]]]
        ok &= ~diff.any(axis=1)
    return {tuple(int(v) for v in row) for row in F[ok]}


def centralizer_of_diagonal(G: FiniteGroupoid, ring: Ring,
                            brute_cap: int = BRUTE_CENTRALIZER_CAP) -> CentralizerResult:
    """Centralizer of ``D`` by a linear solve, compared with ``R𝓗``.

    The singletons ``χ_x`` span ``D``, so commuting with them is enough.  When
    ``|R|^dim <= brute_cap`` the exhaustive set is computed as an oracle too.
    """
    n = G.n_arrows
    A = _commutator_matrix(G, ring)
    lin = Submodule(ring, n, modlinalg.kernel(ring, A, n))
    iso = coordinate_span(ring, n, G.isotropy_arrows())
    agree = lin == iso
    brute = None
    if ring.size**n <= brute_cap:
        brute = _brute_centralizer(G, ring)
        agree = agree and len(brute) == iso.size and all(iso.contains(v) for v in brute)
    return CentralizerResult(lin, iso, brute, agree)


def is_diag_maximal_commutative(G: FiniteGroupoid, ring: Ring, brute_cap: int = 0) -> bool:
    res = centralizer_of_diagonal(G, ring, brute_cap)
    return res.linear == diagonal(G, ring)


def restrict_to_invariant(G: FiniteGroupoid, f, X: Sequence[int]):
    """Restriction of ``f`` to the groupoid over the invariant object set ``X``."""
    if not G.is_invariant(X):
        raise GroupoidError("object set is not invariant", sorted(X))
    if not X:
        return None, ()
    H, arrows, _ = G.restrict(X)
    return H, tuple(f[a] for a in arrows)


# -- abstract presentations ---------------------------------------------------

@dataclass
class AlgebraPresentation:
    ring: Ring
    dim: int
    labels: list[str]
    triples: list[tuple[int, int, int, int]]
    diagonal: list[int]
    grades: list[int]
    grading_group: GradingGroup = field(default_factory=GradingGroup.trivial)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.triples = sorted((int(i), int(j), int(k), int(c)) for i, j, k, c in self.triples if c)
        self.diagonal = sorted(int(d) for d in self.diagonal)
        self._table: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for i, j, k, c in self.triples:
            self._table.setdefault((i, j), []).append((k, c))

    @cached_property
    def sparse(self) -> kernels.SparseConstants:
        return kernels.SparseConstants(self.dim, self.triples)

    # -- arithmetic -------------------------------------------------------
    def mul(self, x, y) -> tuple[int, ...]:
        r = self.ring
        out = [0] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = r.mul(a, b)
                for k, c in self._table.get((i, j), ()):
                    out[k] = r.add(out[k], r.mul(ab, c))
        return tuple(out)

    def mul_batch(self, X, Y) -> np.ndarray:
        return kernels.sc_mul_pairs(X, Y, self.sparse, self.ring)

    def basis(self, i: int) -> tuple[int, ...]:
        return tuple(self.ring.one if j == i else 0 for j in range(self.dim))

    def fibers(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, g in enumerate(self.grades):
            out.setdefault(g, []).append(i)
        return dict(sorted(out.items()))

    def in_diagonal(self, x) -> bool:
        dset = set(self.diagonal)
        return all(i in dset for i, v in enumerate(x) if v)

    def grade_of(self, x):
        """Grade of a nonzero homogeneous element, ``None`` for zero, error otherwise."""
        gs = {self.grades[i] for i, v in enumerate(x) if v}
        if len(gs) > 1:
            raise PresentationError("element is not homogeneous", tuple(x))
        return gs.pop() if gs else None

    # -- validation -------------------------------------------------------
    def validate(self) -> None:
        r, n = self.ring, self.dim
        if len(self.labels) != n or len(self.grades) != n:
            raise PresentationError("labels/grades length differs from dim")
        for i, j, k, c in self.triples:
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n and 0 < c < r.size):
                raise PresentationError("structure constant out of range", (i, j, k, c))
        for g in self.grades:
            if not self.grading_group.contains(g):
                raise PresentationError("grade outside the grading group", g)
        gg = self.grading_group
        for (i, j), terms in self._table.items():
            want = gg.mul(self.grades[i], self.grades[j])
            for k, _ in terms:
                if self.grades[k] != want:
                    raise PresentationError("product of homogeneous elements changes grade",
                                            (i, j, k))
        basis = [self.basis(i) for i in range(n)]
        I, J = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        B = np.array(basis, dtype=np.int32)
        prods = self.mul_batch(B[I.ravel()], B[J.ravel()]).reshape(n, n, n)
        # (e_i e_j) e_k == e_i (e_j e_k) for all triples
        ij = prods.reshape(n * n, n)
        lhs = self.mul_batch(np.repeat(ij, n, axis=0), np.tile(B, (n * n, 1)))
        jk = prods.reshape(n * n, n)
        rhs = self.mul_batch(np.repeat(B, n * n, axis=0), np.tile(jk, (n, 1)))
        bad = np.flatnonzero((lhs != rhs).any(axis=1))
        if bad.size:
            t = int(bad[0])
            raise PresentationError("structure constants are not associative",
                                    (t // (n * n), (t // n) % n, t % n))
        dset = set(self.diagonal)
        for a in self.diagonal:
            if gg.identity != self.grades[a]:
                raise PresentationError("diagonal element outside the identity component", a)
            for b in self.diagonal:
                ab, ba = tuple(prods[a, b]), tuple(prods[b, a])
                if ab != ba:
                    raise PresentationError("diagonal is not commutative", (a, b))
                if any(v and k not in dset for k, v in enumerate(ab)):
                    raise PresentationError("diagonal not closed under product", (a, b))

    # -- serialisation ----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "format": "gpdrecon-presentation",
            "version": FORMAT_VERSION,
            "ring": self.ring.spec(),
            "grading": self.grading_group.spec(),
            "dim": self.dim,
            "labels": list(self.labels),
            "constants": [list(t) for t in self.triples],
            "diagonal": list(self.diagonal),
            "grades": list(self.grades),
            "meta": self.meta,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "AlgebraPresentation":
        try:
            if d.get("format") != "gpdrecon-presentation":
                raise PresentationError("not a presentation file")
            p = cls(parse_ring(d["ring"]), int(d["dim"]), [str(x) for x in d["labels"]],
                    [tuple(t) for t in d["constants"]], list(d["diagonal"]), list(d["grades"]),
                    GradingGroup.from_spec(d["grading"]), dict(d.get("meta", {})))
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"malformed presentation: {exc}") from None
        p.validate()
        return p

    @classmethod
    def loads(cls, text: str) -> "AlgebraPresentation":
        return cls.from_dict(json.loads(text))


def export_presentation(G: FiniteGroupoid, c: Cocycle | None, ring: Ring) -> AlgebraPresentation:
    """Basis = arrows (labels ``b0, b1, ...``); constants from convolving characteristic functions."""
    c = c or Cocycle.trivial(G)
    n = G.n_arrows
    triples = []
    for a in range(n):
        ea = char(G, ring, [a])
        for b in range(n):
            if G.mul(a, b) < 0:
                continue
            prod = convolve(G, ring, ea, char(G, ring, [b]))
            for k, v in enumerate(prod):
                if v:
                    triples.append((a, b, k, v))
    p = AlgebraPresentation(ring, n, [f"b{i}" for i in range(n)], triples, list(G.unit),
                            list(c.grade), c.group)
    p.validate()
    return p


# -- cocycles with unit values and the scrambler --------------------------------

def check_unit_cocycle(G: FiniteGroupoid, ring: Ring, sigma: Sequence[int]):
    """First composable pair where ``σ(αβ) != σ(α)σ(β)``, or ``None``."""
    for a in range(G.n_arrows):
        if not ring.is_unit(sigma[a]):
            return (a,)
    for a in range(G.n_arrows):
        for b in range(G.n_arrows):
            ab = G.mul(a, b)
            if ab >= 0 and sigma[ab] != ring.mul(sigma[a], sigma[b]):
                return (a, b)
    return None


def _homs_to_units(G: FiniteGroupoid, elems: list[int], ring: Ring) -> list[dict[int, int]]:
    """All homomorphisms from a (small) isotropy group into ``R^×``."""
    e = next(a for a in elems if G.is_unit(a))
    gens, span = [], {e}
    for a in elems:
        if a not in span:
            gens.append(a)
            frontier = list(span)
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = G.mul(x, g)
                    if y not in span:
                        span.add(y)
                        frontier.append(y)
    units = sorted(ring.units)
    out = []
    for images in _product(units, len(gens)):
        chi = {e: ring.one}
        frontier = [e]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for g, u in zip(gens, images):
                y, v = G.mul(x, g), ring.mul(chi[x], u)
                if y in chi:
                    if chi[y] != v:
                        ok = False
                        break
                else:
                    chi[y] = v
                    frontier.append(y)
        if ok:
            out.append(chi)
    return out


def _product(values, k):
    if k == 0:
        yield ()
        return
    for head in values:
        for tail in _product(values, k - 1):
            yield (head,) + tail


def sample_sigma(G: FiniteGroupoid, ring: Ring, rng: random.Random) -> list[int]:
    """A random unit-valued cocycle: free values on a spanning tree of each orbit
    plus a random character of the root's isotropy group."""
    units = sorted(ring.units)
    sigma = [0] * G.n_arrows
    for comp in G.orbits():
        x = comp[0]
        tree = {x: (G.unit[x], ring.one)}
        for y in comp[1:]:
            tree[y] = (G.hom(x, y)[0], rng.choice(units))
        _, elems = isotropy_group(G, x)
        chi = rng.choice(_homs_to_units(G, elems, ring))
        for a in range(G.n_arrows):
            d, r = G.dom[a], G.cod[a]
            if d not in tree:
                continue
            td, sd = tree[d]
            tr, sr = tree[r]
            h = G.mul(G.inv[tr], G.mul(a, td))
            sigma[a] = ring.mul(ring.mul(sr, chi[h]), ring.inverse(sd))
    assert check_unit_cocycle(G, ring, sigma) is None
    return sigma


@dataclass
class Scrambled:
    presentation: AlgebraPresentation
    matrix: list[list[int]]  # column i = image of source basis vector i
    permutation: list[int]


def _random_fiber_change(p: AlgebraPresentation, rng: random.Random):
    """Random invertible ``M`` mixing basis vectors inside grade fibers while
    mapping the diagonal span onto itself; returns ``(M, M^-1)`` by columns."""
    r, n = p.ring, p.dim
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    Minv = [row[:] for row in M]
    units = sorted(r.units)
    dset = set(p.diagonal)
    for idx in p.fibers().values():
        for k in idx:
            u = rng.choice(units)
            uinv = r.inverse(u)
            for row in M:
                row[k] = r.mul(row[k], u)
            Minv[k] = [r.mul(x, uinv) for x in Minv[k]]
        for _ in range(2 * len(idx)):
            if len(idx) < 2:
                break
            j, k = rng.sample(idx, 2)
            if k in dset and j not in dset:
                continue
            t = rng.randrange(1, r.size)
            # column k += t * column j; inverse: row j -= t * row k
            for row in M:
                row[k] = r.add(row[k], r.mul(t, row[j]))
            Minv[j] = [r.sub(a, r.mul(t, b)) for a, b in zip(Minv[j], Minv[k])]
    return M, Minv


def _change_basis(p: AlgebraPresentation, M, Minv) -> list[tuple[int, int, int, int]]:
    r, n = p.ring, p.dim
    cols = [tuple(M[i][k] for i in range(n)) for k in range(n)]
    triples = []
    for a in range(n):
        for b in range(n):
            prod = p.mul(cols[a], cols[b])
            if not any(prod):
                continue
            coords = [r.sum(r.mul(Minv[k][i], prod[i]) for i in range(n) if prod[i])
                      for k in range(n)]
            for k, v in enumerate(coords):
                if v:
                    triples.append((a, b, k, v))
    return triples


def scramble(p: AlgebraPresentation, G: FiniteGroupoid, phi: GroupoidIso | Sequence[int],
             sigma: Sequence[int], seed: int, mix: bool = False) -> Scrambled:
    """Transport ``p`` (exported from ``G``) along ``χ_γ ↦ σ(γ) χ_{φ(γ)}``.

    The basis is then permuted by a seeded shuffle and, with ``mix=True``,
    re-chosen inside each grade fiber (keeping a basis of the diagonal).  The
    result is verified to be a diagonal-preserving graded isomorphism.
    """
    r, n = p.ring, p.dim
    amap = list(phi.arrows if isinstance(phi, GroupoidIso) else phi)
    if sorted(amap) != list(range(G.n_arrows)) or n != G.n_arrows:
        raise PresentationError("phi is not a permutation of the arrows")
    for a in range(n):
        for b in range(n):
            ab = G.mul(a, b)
            fab = G.mul(amap[a], amap[b])
            if (ab < 0) != (fab < 0) or (ab >= 0 and amap[ab] != fab):
                raise PresentationError("phi is not a functor", (a, b))
        if p.grades[a] != p.grades[amap[a]]:
            raise PresentationError("phi does not preserve grades", a)
    bad = check_unit_cocycle(G, r, sigma)
    if bad is not None:
        raise PresentationError("sigma is not a unit-valued cocycle", bad)
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    # new index of basis vector gamma is perm[amap[gamma]]
    T = [[0] * n for _ in range(n)]
    for a in range(n):
        T[perm[amap[a]]][a] = sigma[a]
    Tinv_col = {perm[amap[a]]: (a, r.inverse(sigma[a])) for a in range(n)}
    triples = []
    for i2 in range(n):
        a, ua = Tinv_col[i2]
        for j2 in range(n):
            b, ub = Tinv_col[j2]
            for k, c in p._table.get((a, b), ()):
                # e'_{i2} e'_{j2} = ua ub T(e_a e_b)
                coeff = r.mul(r.mul(ua, ub), c)
                triples.append((i2, j2, perm[amap[k]], r.mul(coeff, sigma[k])))
    inv_perm = {perm[amap[a]]: a for a in range(n)}
    grades = [p.grades[inv_perm[i]] for i in range(n)]
    diag = sorted(perm[amap[a]] for a in p.diagonal)
    out = AlgebraPresentation(r, n, [f"s{seed}_{i}" for i in range(n)], triples, diag, grades,
                              p.grading_group, {"scramble_seed": seed, "mix": mix})
    if mix:
        M, Minv = _random_fiber_change(out, rng)
        mixed = AlgebraPresentation(r, n, out.labels, _change_basis(out, M, Minv), diag, grades,
                                    p.grading_group, out.meta)
        # coordinates in the mixed basis: x_new = Minv x_old
        T = [[r.sum(r.mul(Minv[i][k], T[k][j]) for k in range(n)) for j in range(n)]
             for i in range(n)]
        out = mixed
    out.validate()
    if not verify_isomorphism(p, out, T):
        raise AssertionError("scramble did not produce a diagonal-preserving graded isomorphism")
    return Scrambled(out, T, perm)


def verify_isomorphism(p: AlgebraPresentation, q: AlgebraPresentation, T) -> bool:
    """``T`` (matrix, ``T[i][j]`` = coordinate ``i`` of the image of ``e_j``) is a
    graded ring isomorphism ``p -> q`` carrying the diagonal onto the diagonal."""
    r, n = p.ring, p.dim
    if q.dim != n or q.ring != r or q.grading_group != p.grading_group:
        return False
    if not modlinalg.is_invertible(r, T):
        return False
    img = [tuple(T[i][j] for i in range(n)) for j in range(n)]

    def apply(x):
        return tuple(r.sum(r.mul(T[i][j], x[j]) for j in range(n) if x[j]) for i in range(n))

    for a in range(n):
        if any(v and q.grades[i] != p.grades[a] for i, v in enumerate(img[a])):
            return False
        for b in range(n):
            if apply(p.mul(p.basis(a), p.basis(b))) != q.mul(img[a], img[b]):
                return False
    if len(p.diagonal) != len(q.diagonal):
        return False
    # T injective and T(D) inside D' with |D| = |D'| forces T(D) = D'
    return all(q.in_diagonal(img[d]) for d in p.diagonal)


def presentation_centralizer(p: AlgebraPresentation, grade: int | None = None) -> Submodule:
    """Centralizer of the diagonal inside ``p`` (optionally inside one grade fiber)."""
    r, n = p.ring, p.dim
    idx = list(range(n)) if grade is None else p.fibers().get(grade, [])
    rows: list[list[int]] = []
    for d in p.diagonal:
        ed = p.basis(d)
        cols = []
        for a in idx:
            ea = p.basis(a)
            cols.append([r.sub(u, v) for u, v in zip(p.mul(ea, ed), p.mul(ed, ea))])
        if cols:
            rows.extend([list(row) for row in zip(*cols)])
    k = len(idx)
    gens_local = modlinalg.kernel(r, rows, k) if rows else \
        [[r.one if i == j else 0 for i in range(k)] for j in range(k)]
    gens = []
    for g in gens_local:
        v = [0] * n
        for a, x in zip(idx, g):
            v[a] = x
        gens.append(v)
    return Submodule(r, n, gens)


def isotropy_export(G: FiniteGroupoid, c: Cocycle | None, ring: Ring, grade: int | None = None):
    """Export of ``𝓗`` (optionally only its arrows of one grade) as a presentation."""
    H, arrows, _ = isotropy_interior(G)
    cH = (c or Cocycle.trivial(G)).restrict(arrows)
    if grade is not None:
        keep = [i for i, g in enumerate(cH.grade) if g == grade]
        H, sub, _ = H.subgroupoid(keep, list(range(H.n_objects)))
        cH = cH.restrict(sub)
    return export_presentation(H, cH, ring)
