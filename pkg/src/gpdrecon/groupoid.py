"""Finite discrete groupoids, cocycles, local bisections and graded isomorphism.

A finite space carries the discrete topology, so every finite groupoid is
ample and Hausdorff, the interior of the isotropy bundle is the isotropy bundle
itself, and every point is isolated.  Nothing here models a non-discrete
topology.

Orientation: ``compose[a, b]`` is the product ``ab``, defined when
``dom(a) == cod(b)``; it runs from ``dom(b)`` to ``cod(a)``.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from . import kernels
from .group_ring import CapacityError, FiniteGroup, GradingGroup
from .inverse_semigroup import InvSemigroup, meet

MAX_FIBER_ARROWS = 16
DEFAULT_ISO_CAP = 200_000


class GroupoidError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


class InconclusiveError(RuntimeError):
    """Isomorphism search hit its step cap before deciding."""


class FiniteGroupoid:
    def __init__(self, objects: Sequence[Hashable], arrows: Sequence[Hashable],
                 dom: Sequence[int], cod: Sequence[int], compose, validate: bool = True):
        self.objects = list(objects)
        self.arrows = list(arrows)
        self.dom = [int(x) for x in dom]
        self.cod = [int(x) for x in cod]
        self.compose = np.ascontiguousarray(compose, dtype=np.int32)
        self.n_objects = len(self.objects)
        self.n_arrows = len(self.arrows)
        self.arrow_index = {a: i for i, a in enumerate(self.arrows)}
        self.object_index = {x: i for i, x in enumerate(self.objects)}
        if self.compose.shape != (self.n_arrows, self.n_arrows):
            raise GroupoidError("composition table has the wrong shape")
        self.unit = self._find_units()
        self.inv = self._find_inverses()
        if validate:
            self.validate()

    @classmethod
    def from_rule(cls, objects, arrows, dom, cod, mul, validate: bool = True):
        """Build the table from ``mul(a, b) -> arrow label`` on composable pairs."""
        idx = {a: i for i, a in enumerate(arrows)}
        n = len(arrows)
        table = np.full((n, n), -1, dtype=np.int32)
        for i, a in enumerate(arrows):
            for j, b in enumerate(arrows):
                if dom[i] == cod[j]:
                    table[i, j] = idx[mul(a, b)]
        return cls(objects, arrows, dom, cod, table, validate)

    def _find_units(self) -> list[int]:
        unit = []
        for x in range(self.n_objects):
            cands = [a for a in range(self.n_arrows)
                     if self.dom[a] == x and self.cod[a] == x and self.compose[a, a] == a]
            if len(cands) != 1:
                raise GroupoidError("object lacks a unique identity arrow", self.objects[x])
            unit.append(cands[0])
        return unit

    def _find_inverses(self) -> list[int]:
        inv = []
        for a in range(self.n_arrows):
            d, c = self.dom[a], self.cod[a]
            cands = [b for b in range(self.n_arrows) if self.dom[b] == c and self.cod[b] == d
                     and self.compose[b, a] == self.unit[d] and self.compose[a, b] == self.unit[c]]
            if not cands:
                raise GroupoidError("arrow has no inverse", self.arrows[a])
            inv.append(cands[0])
        return inv

    def validate(self) -> None:
        t = self.compose
        n = self.n_arrows
        for a in range(n):
            for b in range(n):
                ab = int(t[a, b])
                if (ab >= 0) != (self.dom[a] == self.cod[b]):
                    raise GroupoidError("composition defined exactly on composable pairs",
                                        (self.arrows[a], self.arrows[b]))
                if ab >= 0 and (self.dom[ab] != self.dom[b] or self.cod[ab] != self.cod[a]):
                    raise GroupoidError("product has wrong endpoints", (self.arrows[a], self.arrows[b]))
        bad = kernels.first_nonassociative(t)
        if bad is not None:
            raise GroupoidError("composition is not associative",
                                tuple(self.arrows[i] for i in bad))
        for a in range(n):
            if t[self.unit[self.cod[a]], a] != a or t[a, self.unit[self.dom[a]]] != a:
                raise GroupoidError("identity law fails", self.arrows[a])
        for x in range(self.n_objects):
            u = self.unit[x]
            if self.dom[u] != x or self.cod[u] != x:
                raise GroupoidError("unit arrow has wrong endpoints", self.objects[x])

    # -- helpers ----------------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        """``ab`` or ``-1`` when not composable."""
        return int(self.compose[a, b])

    def hom(self, x: int, y: int) -> list[int]:
        """Arrows from ``x`` to ``y``."""
        return [a for a in range(self.n_arrows) if self.dom[a] == x and self.cod[a] == y]

    def is_unit(self, a: int) -> bool:
        return self.unit[self.dom[a]] == a

    def isotropy_arrows(self) -> list[int]:
        return [a for a in range(self.n_arrows) if self.dom[a] == self.cod[a]]

    def orbits(self) -> list[list[int]]:
        """Connected components as sorted object lists, ordered by least object."""
        parent = list(range(self.n_objects))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in range(self.n_arrows):
            ra, rb = find(self.dom[a]), find(self.cod[a])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        comps: dict[int, list[int]] = {}
        for x in range(self.n_objects):
            comps.setdefault(find(x), []).append(x)
        return [comps[k] for k in sorted(comps)]

    def is_invariant(self, objs) -> bool:
        objs = set(objs)
        return all((self.dom[a] in objs) == (self.cod[a] in objs) for a in range(self.n_arrows))

    def subgroupoid(self, arrows: Sequence[int], objects: Sequence[int] | None = None):
        """Subgroupoid on ``arrows`` (objects default to their endpoints, units added).

        Returns ``(H, arrow_embedding, object_embedding)``.
        """
        arrows = set(arrows)
        if objects is None:
            objects = sorted({self.dom[a] for a in arrows} | {self.cod[a] for a in arrows})
        objects = list(objects)
        arrows |= {self.unit[x] for x in objects}
        arrows = sorted(arrows)
        opos = {x: i for i, x in enumerate(objects)}
        apos = {a: i for i, a in enumerate(arrows)}
        n = len(arrows)
        table = np.full((n, n), -1, dtype=np.int32)
        for i, a in enumerate(arrows):
            if self.dom[a] not in opos or self.cod[a] not in opos:
                raise GroupoidError("arrow leaves the object set", self.arrows[a])
            for j, b in enumerate(arrows):
                ab = self.mul(a, b)
                if ab >= 0:
                    if ab not in apos:
                        raise GroupoidError("arrow set not closed under composition",
                                            (self.arrows[a], self.arrows[b]))
                    table[i, j] = apos[ab]
        for a in arrows:
            if self.inv[a] not in apos:
                raise GroupoidError("arrow set not closed under inverses", self.arrows[a])
        H = FiniteGroupoid([self.objects[x] for x in objects], [self.arrows[a] for a in arrows],
                           [opos[self.dom[a]] for a in arrows], [opos[self.cod[a]] for a in arrows],
                           table)
        return H, arrows, objects

    def restrict(self, objs: Sequence[int]):
        """Restriction to an invariant object set (a union of orbits)."""
        if not self.is_invariant(objs):
            raise GroupoidError("object set is not invariant", sorted(objs))
        objs = sorted(objs)
        keep = [a for a in range(self.n_arrows) if self.dom[a] in set(objs)]
        return self.subgroupoid(keep, objs)

    def summary(self) -> dict:
        return {
            "objects": self.n_objects,
            "arrows": self.n_arrows,
            "orbits": [len(o) for o in self.orbits()],
            "isotropy_orders": [len(self.hom(x, x)) for x in range(self.n_objects)],
            "effective": is_effective(self),
        }

    def __repr__(self):
        return f"FiniteGroupoid({self.n_objects} objects, {self.n_arrows} arrows)"


# -- constructors -------------------------------------------------------------

def pair_groupoid(n: int) -> FiniteGroupoid:
    """Objects ``1..n``; arrow ``(i, j)`` goes from ``j`` to ``i``."""
    if n < 1:
        raise GroupoidError("pair groupoid needs n >= 1")
    objs = list(range(1, n + 1))
    arrows = [(i, j) for i in objs for j in objs]
    return FiniteGroupoid.from_rule(objs, arrows, [j - 1 for _, j in arrows],
                                    [i - 1 for i, _ in arrows], lambda a, b: (a[0], b[1]))


def unit_groupoid(n: int) -> FiniteGroupoid:
    objs = list(range(1, n + 1))
    return FiniteGroupoid.from_rule(objs, [(i, i) for i in objs], range(n), range(n),
                                    lambda a, b: a)


def group_as_groupoid(G: FiniteGroup) -> FiniteGroupoid:
    n = G.order
    return FiniteGroupoid(["*"], list(G.labels), [0] * n, [0] * n, G.table)


def group_bundle(groups: Sequence[FiniteGroup]) -> FiniteGroupoid:
    """Disjoint union of one-object groupoids; arrow labels are ``(object, element)``."""
    arrows, dom = [], []
    for x, G in enumerate(groups):
        for g in G.labels:
            arrows.append((x, g))
            dom.append(x)
    offs = np.cumsum([0] + [G.order for G in groups])
    n = len(arrows)
    table = np.full((n, n), -1, dtype=np.int32)
    for x, G in enumerate(groups):
        o = offs[x]
        table[o:o + G.order, o:o + G.order] = G.table + o
    return FiniteGroupoid(list(range(len(groups))), arrows, dom, dom, table)


def disjoint_union(G1: FiniteGroupoid, G2: FiniteGroupoid) -> FiniteGroupoid:
    objs = [(0, x) for x in G1.objects] + [(1, x) for x in G2.objects]
    arrows = [(0, a) for a in G1.arrows] + [(1, a) for a in G2.arrows]
    n1, m1 = G1.n_arrows, G1.n_objects
    n = n1 + G2.n_arrows
    table = np.full((n, n), -1, dtype=np.int32)
    table[:n1, :n1] = G1.compose
    t2 = G2.compose.copy()
    t2[t2 >= 0] += n1
    table[n1:, n1:] = t2
    dom = G1.dom + [d + m1 for d in G2.dom]
    cod = G1.cod + [c + m1 for c in G2.cod]
    return FiniteGroupoid(objs, arrows, dom, cod, table)


def product(G1: FiniteGroupoid, G2: FiniteGroupoid) -> FiniteGroupoid:
    objs = [(x, y) for x in G1.objects for y in G2.objects]
    pairs = [(a, b) for a in range(G1.n_arrows) for b in range(G2.n_arrows)]
    m2 = G2.n_objects
    dom = [G1.dom[a] * m2 + G2.dom[b] for a, b in pairs]
    cod = [G1.cod[a] * m2 + G2.cod[b] for a, b in pairs]
    n2 = G2.n_arrows
    n = len(pairs)
    table = np.full((n, n), -1, dtype=np.int32)
    for i, (a, b) in enumerate(pairs):
        for j, (c, d) in enumerate(pairs):
            ac, bd = G1.mul(a, c), G2.mul(b, d)
            if ac >= 0 and bd >= 0:
                table[i, j] = ac * n2 + bd
    labels = [(G1.arrows[a], G2.arrows[b]) for a, b in pairs]
    return FiniteGroupoid(objs, labels, dom, cod, table)


# -- cocycles -----------------------------------------------------------------

@dataclass
class Cocycle:
    group: GradingGroup
    grade: list[int]

    @classmethod
    def trivial(cls, G: FiniteGroupoid) -> "Cocycle":
        return cls(GradingGroup.trivial(), [0] * G.n_arrows)

    def validate(self, G: FiniteGroupoid) -> None:
        gg = self.group
        if len(self.grade) != G.n_arrows:
            raise GroupoidError("cocycle length differs from arrow count")
        for g in self.grade:
            if not gg.contains(g):
                raise GroupoidError("grade outside the grading group", g)
        for u in G.unit:
            if self.grade[u] != gg.identity:
                raise GroupoidError("unit arrow with non-identity grade", G.arrows[u])
        for a in range(G.n_arrows):
            for b in range(G.n_arrows):
                ab = G.mul(a, b)
                if ab >= 0 and self.grade[ab] != gg.mul(self.grade[a], self.grade[b]):
                    raise GroupoidError("cocycle law fails", (G.arrows[a], G.arrows[b]))
            if self.grade[G.inv[a]] != gg.inv(self.grade[a]):
                raise GroupoidError("cocycle does not invert", G.arrows[a])

    def fibers(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for a, g in enumerate(self.grade):
            out.setdefault(g, []).append(a)
        return dict(sorted(out.items()))

    def restrict(self, arrows: Sequence[int]) -> "Cocycle":
        return Cocycle(self.group, [self.grade[a] for a in arrows])


def disjoint_union_cocycle(c1: Cocycle, c2: Cocycle) -> Cocycle:
    if c1.group != c2.group:
        raise GroupoidError("cocycles take values in different groups")
    return Cocycle(c1.group, c1.grade + c2.grade)


# -- isotropy ---------------------------------------------------------------

def isotropy_group(G: FiniteGroupoid, x: int, arrows: Sequence[int] | None = None):
    """``(H_x, embedding)``; ``arrows`` optionally restricts to a subset (e.g. a grade fiber)."""
    allowed = None if arrows is None else set(arrows)
    elems = [a for a in G.hom(x, x) if allowed is None or a in allowed]
    pos = {a: i for i, a in enumerate(elems)}
    table = [[pos[G.mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, [str(G.arrows[a]) for a in elems], name=f"H_{G.objects[x]}"), elems


def isotropy_interior(G: FiniteGroupoid):
    """The isotropy bundle as a wide subgroupoid (open because the space is discrete)."""
    return G.subgroupoid(G.isotropy_arrows(), list(range(G.n_objects)))


def is_effective(G: FiniteGroupoid) -> bool:
    return all(G.is_unit(a) for a in G.isotropy_arrows())


# -- local bisections -------------------------------------------------------

def is_local_bisection(G: FiniteGroupoid, U) -> bool:
    U = list(U)
    return len({G.dom[a] for a in U}) == len(U) == len({G.cod[a] for a in U})


def bisection_product(G: FiniteGroupoid, U, V) -> frozenset:
    by_cod = {G.cod[b]: b for b in V}
    out = []
    for a in U:
        b = by_cod.get(G.dom[a])
        if b is not None:
            out.append(G.mul(a, b))
    return frozenset(out)


def bisection_inverse(G: FiniteGroupoid, U) -> frozenset:
    return frozenset(G.inv[a] for a in U)


def enumerate_bisections(G: FiniteGroupoid, arrows: Sequence[int]) -> list[frozenset]:
    """All local bisections inside ``arrows`` (including the empty one)."""
    if len(arrows) > MAX_FIBER_ARROWS:
        raise CapacityError(f"fiber of {len(arrows)} arrows exceeds {MAX_FIBER_ARROWS}")
    by_dom: dict[int, list[int]] = {}
    for a in sorted(arrows):
        by_dom.setdefault(G.dom[a], []).append(a)
    doms = sorted(by_dom)
    out: list[frozenset] = []

    def rec(i, chosen, used_cod):
        if i == len(doms):
            out.append(frozenset(chosen))
            return
        rec(i + 1, chosen, used_cod)
        for a in by_dom[doms[i]]:
            if G.cod[a] not in used_cod:
                chosen.append(a)
                used_cod.add(G.cod[a])
                rec(i + 1, chosen, used_cod)
                chosen.pop()
                used_cod.discard(G.cod[a])

    rec(0, [], set())
    return out


def bisection_key(U) -> tuple:
    return (len(U), tuple(sorted(U)))


def bisections(G: FiniteGroupoid, c: Cocycle | None = None, cap: int = 2000) -> InvSemigroup:
    """``Γc(G)`` or, with a cocycle, the homogeneous part ``Γc^h(G)``.

    Labels are frozensets of arrow indices; ``∅`` is the zero.  With a cocycle
    the result is graded by the common grade of the arrows.
    """
    if c is None:
        cands = set(enumerate_bisections(G, range(G.n_arrows)))
    else:
        cands = set()
        for arrows in c.fibers().values():
            cands.update(enumerate_bisections(G, arrows))
    if len(cands) > cap:
        raise CapacityError(f"{len(cands)} bisections exceed cap {cap}")
    elems = sorted(cands, key=bisection_key)
    index = {U: i for i, U in enumerate(elems)}
    n = len(elems)
    # d-indexed lookup makes the product linear in |U|
    by_cod = [{G.cod[b]: b for b in V} for V in elems]
    table = np.empty((n, n), dtype=np.int32)
    for i, U in enumerate(elems):
        for j in range(n):
            bc = by_cod[j]
            prod = []
            for a in U:
                b = bc.get(G.dom[a])
                if b is not None:
                    prod.append(int(G.compose[a, b]))
            table[i, j] = index[frozenset(prod)]
    zero = index[frozenset()]
    grading = group = None
    if c is not None:
        group = c.group
        grading = {i: c.grade[next(iter(U))] for i, U in enumerate(elems) if U}
    return InvSemigroup(elems, table, zero, grading, group)


def binary_meets_check(S: InvSemigroup, G: FiniteGroupoid | None = None) -> bool:
    """Every pair has a meet; for bisection semigroups it is the intersection."""
    for s in range(S.n):
        for t in range(s, S.n):
            m = meet(S, s, t)
            if m is None:
                return False
            if G is not None:
                inter = S.labels[s] & S.labels[t]
                if S.labels[m] != inter:
                    return False
    return True


# -- graded isomorphism -----------------------------------------------------

@dataclass
class GroupoidIso:
    objects: list[int]
    arrows: list[int]


def is_graded_iso(G1: FiniteGroupoid, c1: Cocycle | None, G2: FiniteGroupoid,
                  c2: Cocycle | None, amap: Sequence[int]) -> bool:
    if G1.n_arrows != G2.n_arrows or sorted(amap) != list(range(G2.n_arrows)):
        return False
    for a in range(G1.n_arrows):
        for b in range(G1.n_arrows):
            ab = G1.mul(a, b)
            fab = G2.mul(amap[a], amap[b])
            if (ab < 0) != (fab < 0) or (ab >= 0 and amap[ab] != fab):
                return False
    if c1 is not None and c2 is not None:
        if c1.group != c2.group:
            return False
        return all(c1.grade[a] == c2.grade[amap[a]] for a in range(G1.n_arrows))
    return True


def _grades(G, c):
    return c.grade if c is not None else [0] * G.n_arrows


def _component_signature(G, c, comp):
    grade = _grades(G, c)
    objs = set(comp)
    arrows = [a for a in range(G.n_arrows) if G.dom[a] in objs]
    return (len(comp), len(arrows) // len(comp) if comp else 0,
            tuple(sorted(Counter(grade[a] for a in arrows).items())))


def _group_isos(G1, H1, G2, H2, grade1, grade2, rng, budget):
    """Grade-preserving isomorphisms between isotropy groups given as arrow lists."""
    if len(H1) != len(H2):
        return
    e1, e2 = H1[0], H2[0]
    for a in H1:
        if G1.is_unit(a):
            e1 = a
    for a in H2:
        if G2.is_unit(a):
            e2 = a
    # greedy generating set of H1
    gens, span = [], {e1}
    for a in H1:
        if a not in span:
            gens.append(a)
            frontier = list(span)
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = G1.mul(x, g)
                    if y not in span:
                        span.add(y)
                        frontier.append(y)

    def order(G, a, e):
        k, x = 1, a
        while x != e:
            x = G.mul(x, a)
            k += 1
        return k

    cands = []
    for g in gens:
        opts = [h for h in H2 if order(G2, h, e2) == order(G1, g, e1) and grade2[h] == grade1[g]]
        if rng is not None:
            rng.shuffle(opts)
        cands.append(opts)

    def extend(images):
        phi = {e1: e2}
        frontier = [e1]
        while frontier:
            x = frontier.pop()
            for g, h in zip(gens, images):
                y, z = G1.mul(x, g), G2.mul(phi[x], h)
                if y in phi:
                    if phi[y] != z:
                        return None
                else:
                    phi[y] = z
                    frontier.append(y)
        if len(set(phi.values())) != len(H1):
            return None
        if any(grade1[a] != grade2[phi[a]] for a in H1):
            return None
        return phi

    for images in itertools.product(*cands):
        budget[0] -= 1
        if budget[0] < 0:
            raise InconclusiveError("isomorphism search exceeded its step cap")
        phi = extend(images)
        if phi is not None:
            yield phi


def _component_iso(G1, c1, comp1, G2, c2, comp2, rng, budget):
    grade1, grade2 = _grades(G1, c1), _grades(G2, c2)
    x = comp1[0]
    H1 = G1.hom(x, x)
    tree = {x: G1.unit[x]}
    for x2 in comp1[1:]:
        tree[x2] = G1.hom(x, x2)[0]
    roots = list(comp2)
    if rng is not None:
        rng.shuffle(roots)
    for y in roots:
        H2 = G2.hom(y, y)
        for phi in _group_isos(G1, H1, G2, H2, grade1, grade2, rng, budget):
            # assign each x2 != x an object y2 and an arrow y -> y2 of the same grade
            rest = comp1[1:]
            omap = {x: y}
            tmap = {x: G2.unit[y]}

            def rec(i):
                budget[0] -= 1
                if budget[0] < 0:
                    raise InconclusiveError("isomorphism search exceeded its step cap")
                if i == len(rest):
                    return True
                x2 = rest[i]
                want = grade1[tree[x2]]
                opts = [y2 for y2 in comp2 if y2 not in omap.values()]
                if rng is not None:
                    rng.shuffle(opts)
                for y2 in opts:
                    arrows = [s for s in G2.hom(y, y2) if grade2[s] == want]
                    if arrows:
                        omap[x2], tmap[x2] = y2, arrows[0]
                        if rec(i + 1):
                            return True
                        del omap[x2], tmap[x2]
                return False

            if not rec(0):
                continue
            amap = {}
            for a in (a for a in range(G1.n_arrows) if G1.dom[a] in tree):
                d, r = G1.dom[a], G1.cod[a]
                # a = t_r h t_d^{-1}
                h = G1.mul(G1.inv[tree[r]], G1.mul(a, tree[d]))
                amap[a] = G2.mul(tmap[r], G2.mul(phi[h], G2.inv[tmap[d]]))
            if all(grade1[a] == grade2[b] for a, b in amap.items()):
                return omap, amap
    return None


def graded_iso_search(G1: FiniteGroupoid, c1: Cocycle | None, G2: FiniteGroupoid,
                      c2: Cocycle | None, cap: int = DEFAULT_ISO_CAP,
                      rng: random.Random | None = None) -> GroupoidIso | None:
    """A grade-preserving groupoid isomorphism ``G1 -> G2`` or ``None``.

    Passing ``c1 = c2 = None`` ignores gradings.  Cheap invariants are compared
    first; then each orbit is matched through a root object, an isotropy
    isomorphism and a spanning tree of arrows out of the root.  ``rng``
    randomises the candidate order, which turns the search into a sampler of
    automorphisms.  Raises :class:`InconclusiveError` once ``cap`` steps pass.
    """
    if (c1 is None) != (c2 is None):
        raise GroupoidError("either both or neither groupoid must be graded")
    if c1 is not None and c1.group != c2.group:
        return None
    if (G1.n_objects, G1.n_arrows) != (G2.n_objects, G2.n_arrows):
        return None
    if Counter(_grades(G1, c1)) != Counter(_grades(G2, c2)):
        return None
    comps1, comps2 = G1.orbits(), G2.orbits()
    sig1 = [_component_signature(G1, c1, c) for c in comps1]
    sig2 = [_component_signature(G2, c2, c) for c in comps2]
    if sorted(sig1) != sorted(sig2):
        return None
    budget = [cap]
    order2 = list(range(len(comps2)))
    # component isomorphism is an equivalence, so a greedy match is enough
    used: set[int] = set()
    omap_all, amap_all = {}, {}
    for i, comp in enumerate(comps1):
        cands = [j for j in order2 if j not in used and sig2[j] == sig1[i]]
        if rng is not None:
            rng.shuffle(cands)
        for j in cands:
            res = _component_iso(G1, c1, comp, G2, c2, comps2[j], rng, budget)
            if res is not None:
                used.add(j)
                omap_all.update(res[0])
                amap_all.update(res[1])
                break
        else:
            return None
    amap = [amap_all[a] for a in range(G1.n_arrows)]
    omap = [omap_all[x] for x in range(G1.n_objects)]
    if not is_graded_iso(G1, c1, G2, c2, amap):
        raise AssertionError("search produced a map that is not a graded isomorphism")
    return GroupoidIso(omap, amap)


def random_automorphism(G: FiniteGroupoid, c: Cocycle | None, rng: random.Random,
                        cap: int = DEFAULT_ISO_CAP) -> GroupoidIso:
    iso = graded_iso_search(G, c, G, c, cap=cap, rng=rng)
    assert iso is not None
    return iso
