"""Finite groups, grading groups and group rings ``R[G]`` with unit censuses."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .coeff_ring import Ring

DEFAULT_CENSUS_CAP = 10**7


class CapacityError(RuntimeError):
    """A computation would exceed its documented enumeration cap."""


class FiniteGroup:
    """A finite group given by a Cayley table on ``range(order)``."""

    def __init__(self, table, labels=None, name: str = "G"):
        table = [list(map(int, row)) for row in table]
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise ValueError("group table must be a nonempty square")
        for row in table:
            if any(not 0 <= x < n for x in row):
                raise ValueError("group table entry out of range")
        ident = next(
            (e for e in range(n) if all(table[e][x] == x == table[x][e] for x in range(n))),
            None,
        )
        if ident is None:
            raise ValueError("group table has no identity")
        inv = []
        for a in range(n):
            b = next((b for b in range(n) if table[a][b] == ident == table[b][a]), None)
            if b is None:
                raise ValueError(f"element {a} has no inverse")
            inv.append(b)
        t = np.array(table)
        assoc = kernels.first_nonassociative(t.astype(np.int32))
        if assoc is not None:
            raise ValueError(f"group table not associative at {assoc}")
        self.table = table
        self.order = n
        self.identity = ident
        self.inv = inv
        self.labels = list(labels) if labels is not None else [f"g{i}" for i in range(n)]
        self.name = name

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise ValueError("cyclic order must be positive")
        labels = ["1"] + (["g"] if n == 2 else [f"g^{i}" for i in range(1, n)])
        if n > 2:
            labels[1] = "g"
        return cls([[(i + j) % n for j in range(n)] for i in range(n)], labels, f"C{n}")

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls.cyclic(1)

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        perms = list(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(a[b[x]] for x in range(n))] for b in perms] for a in perms]
        return cls(table, ["".join(map(str, p)) for p in perms], f"S{n}")

    @classmethod
    def direct_product(cls, g: "FiniteGroup", h: "FiniteGroup") -> "FiniteGroup":
        pairs = [(a, b) for a in range(g.order) for b in range(h.order)]
        index = {p: i for i, p in enumerate(pairs)}
        table = [
            [index[(g.table[a][c], h.table[b][d])] for (c, d) in pairs] for (a, b) in pairs
        ]
        labels = [f"({g.labels[a]},{h.labels[b]})" for a, b in pairs]
        return cls(table, labels, f"{g.name}x{h.name}")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in range(self.order) for b in range(a))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def parse_group(spec) -> FiniteGroup:
    """``{"cyclic": n}``, ``{"symmetric": n}``, ``{"table": [[..]]}``,
    ``{"product": [spec, spec]}``, ``{"trivial": true}`` or a string like
    ``"cyclic2"``, ``"klein"``."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        s = spec.strip().lower()
        if s in ("klein", "v4"):
            return FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
        if s in ("trivial", "1"):
            return FiniteGroup.trivial()
        for prefix, maker in (("cyclic", FiniteGroup.cyclic), ("c", FiniteGroup.cyclic),
                              ("sym", FiniteGroup.symmetric), ("s", FiniteGroup.symmetric)):
            if s.startswith(prefix) and s[len(prefix):].isdigit():
                return maker(int(s[len(prefix):]))
        raise ValueError(f"cannot parse group {spec!r}")
    if isinstance(spec, dict):
        if "group" in spec and len(spec) == 1:
            return parse_group(spec["group"])
        if "cyclic" in spec:
            return FiniteGroup.cyclic(int(spec["cyclic"]))
        if "symmetric" in spec:
            return FiniteGroup.symmetric(int(spec["symmetric"]))
        if "trivial" in spec:
            return FiniteGroup.trivial()
        if "table" in spec:
            return FiniteGroup(spec["table"], spec.get("labels"), spec.get("name", "G"))
        if "product" in spec:
            a, b = spec["product"]
            return FiniteGroup.direct_product(parse_group(a), parse_group(b))
    raise ValueError(f"cannot parse group {spec!r}")


class GradingGroup:
    """The group a cocycle takes values in: trivial, the integers, or finite.

    Grade values are ints: ``0`` for the trivial group, the integer itself for
    ``Z``, an element index for a finite group.
    """

    def __init__(self, kind: str, group: FiniteGroup | None = None):
        if kind not in ("trivial", "integers", "finite"):
            raise ValueError(f"unknown grading kind {kind!r}")
        if (kind == "finite") != (group is not None):
            raise ValueError("a finite grading group needs its FiniteGroup")
        self.kind = kind
        self.group = group

    @classmethod
    def trivial(cls):
        return cls("trivial")

    @classmethod
    def integers(cls):
        return cls("integers")

    @classmethod
    def finite(cls, group: FiniteGroup):
        return cls("finite", group)

    @property
    def identity(self) -> int:
        return self.group.identity if self.kind == "finite" else 0

    def mul(self, a: int, b: int) -> int:
        if self.kind == "trivial":
            return 0
        if self.kind == "integers":
            return a + b
        return self.group.table[a][b]

    def inv(self, a: int) -> int:
        if self.kind == "trivial":
            return 0
        if self.kind == "integers":
            return -a
        return self.group.inv[a]

    def contains(self, a) -> bool:
        if isinstance(a, bool) or not isinstance(a, int):
            return False
        if self.kind == "trivial":
            return a == 0
        if self.kind == "finite":
            return 0 <= a < self.group.order
        return True

    def label(self, a: int) -> str:
        if self.kind == "finite":
            return self.group.labels[a]
        return str(a)

    def spec(self) -> dict:
        if self.kind == "finite":
            return {"kind": "finite", "table": self.group.table, "labels": self.group.labels}
        return {"kind": self.kind}

    @classmethod
    def from_spec(cls, spec) -> "GradingGroup":
        if spec is None:
            return cls.trivial()
        if isinstance(spec, str):
            spec = {"kind": spec}
        kind = spec.get("kind", "trivial")
        if kind == "finite":
            if "table" in spec:
                return cls.finite(FiniteGroup(spec["table"], spec.get("labels")))
            return cls.finite(parse_group(spec["group"]))
        return cls(kind)

    def __eq__(self, other):
        if not isinstance(other, GradingGroup) or self.kind != other.kind:
            return False
        return self.kind != "finite" or self.group.table == other.group.table

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"GradingGroup({self.kind})"


@dataclass(frozen=True)
class GroupRingElem:
    """An element of ``R[G]``; ``coeffs`` is a dense tuple indexed by group element."""

    ring: Ring
    group: FiniteGroup
    coeffs: tuple[int, ...]

    @classmethod
    def from_dict(cls, ring, group, coeffs: dict[int, int]) -> "GroupRingElem":
        """``coeffs`` maps group element index to an (encoded) ring element."""
        dense = [0] * group.order
        for g, c in coeffs.items():
            if not 0 <= c < ring.size:
                raise ValueError(f"{c} is not an element of {ring!r}")
            dense[g] = ring.add(dense[g], c)
        return cls(ring, group, tuple(dense))

    @classmethod
    def one(cls, ring, group) -> "GroupRingElem":
        return cls.from_dict(ring, group, {group.identity: ring.one})

    def support(self) -> list[int]:
        return [g for g, c in enumerate(self.coeffs) if c]

    def as_dict(self) -> dict[int, int]:
        return {g: c for g, c in enumerate(self.coeffs) if c}

    def __mul__(self, other: "GroupRingElem") -> "GroupRingElem":
        return gr_multiply(self, other)

    def __str__(self):
        terms = []
        for g, c in enumerate(self.coeffs):
            if not c:
                continue
            lab = self.group.labels[g]
            cs = self.ring.format(c)
            if g == self.group.identity:
                terms.append(cs)
            else:
                terms.append(lab if c == self.ring.one else f"{cs}{lab}")
        return "+".join(terms) if terms else "0"


def gr_multiply(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
    if a.ring != b.ring or a.group is not b.group and a.group.table != b.group.table:
        raise ValueError("group ring elements over different rings or groups")
    r, g = a.ring, a.group
    out = [0] * g.order
    for x, cx in enumerate(a.coeffs):
        if not cx:
            continue
        row = g.table[x]
        for y, cy in enumerate(b.coeffs):
            if cy:
                z = row[y]
                out[z] = r.add(out[z], r.mul(cx, cy))
    return GroupRingElem(r, g, tuple(out))


def is_trivial_unit(a: GroupRingElem) -> bool:
    supp = a.support()
    return len(supp) == 1 and a.ring.is_unit(a.coeffs[supp[0]])


def _encode(ring: Ring, coeffs) -> int:
    idx = 0
    for c in reversed(coeffs):
        idx = idx * ring.size + c
    return idx


def _decode(ring: Ring, group: FiniteGroup, idx: int) -> tuple[int, ...]:
    out = []
    for _ in range(group.order):
        idx, c = divmod(idx, ring.size)
        out.append(c)
    return tuple(out)


@dataclass
class UnitCensus:
    ring: Ring
    group: FiniteGroup
    element_count: int
    unit_count: int
    trivial_count: int
    nontrivial_witnesses: list[GroupRingElem] = field(default_factory=list)
    inverses: dict[tuple[int, ...], tuple[int, ...]] = field(default_factory=dict)

    @property
    def nontrivial_count(self) -> int:
        return self.unit_count - self.trivial_count


def unit_census(r: Ring, g: FiniteGroup, cap: int = DEFAULT_CENSUS_CAP) -> UnitCensus:
    """Exhaustive census of ``(R[G])^x``.

    Each element's multiplicative orbit ``a, a^2, ...`` is followed until it
    repeats; ``a`` is a unit exactly when the orbit returns to ``1``, and then
    ``a^(k-1)`` is its two-sided inverse.
    """
    total = r.size**g.order
    if total > cap:
        raise CapacityError(f"|R|^|G| = {total} exceeds census cap {cap}")
    inv_idx = kernels.group_ring_units(r, np.array(g.table, dtype=np.int32), g.identity, total)
    census = UnitCensus(r, g, total, 0, 0)
    for idx in np.flatnonzero(inv_idx >= 0):
        a = GroupRingElem(r, g, _decode(r, g, int(idx)))
        ainv = GroupRingElem(r, g, _decode(r, g, int(inv_idx[idx])))
        one = GroupRingElem.one(r, g)
        if gr_multiply(a, ainv) != one or gr_multiply(ainv, a) != one:
            raise AssertionError(f"census inverse check failed for {a}")
        census.unit_count += 1
        census.inverses[a.coeffs] = ainv.coeffs
        if is_trivial_unit(a):
            census.trivial_count += 1
        else:
            census.nontrivial_witnesses.append(a)
    census.nontrivial_witnesses.sort(key=lambda e: e.coeffs)
    return census


@dataclass(frozen=True)
class UnitWitness:
    unit: GroupRingElem
    inverse: GroupRingElem
    construction: str  # "idempotent" or "nilpotent"


def nontrivial_unit_witness(r: Ring, g: FiniteGroup) -> UnitWitness | None:
    """The explicit nontrivial unit forced by a decomposable or non-reduced ring.

    With an idempotent ``e`` other than 0, 1: ``e + (1-e)h`` with inverse
    ``e + (1-e)h^-1``.  With a nonzero nilpotent ``n``: ``1 - nh`` with inverse
    ``sum_j (nh)^j``.  Idempotents are tried first; ``h`` is the first
    non-identity element.
    """
    if g.is_trivial():
        raise ValueError("witnesses need a nontrivial group")
    h = next(x for x in range(g.order) if x != g.identity)
    one = r.one
    nontriv_idem = sorted(r.idempotents - {0, one})
    if nontriv_idem:
        e = nontriv_idem[0]
        f = r.sub(one, e)
        u = GroupRingElem.from_dict(r, g, {g.identity: e, h: f})
        uinv = GroupRingElem.from_dict(r, g, {g.identity: e, g.inv[h]: f})
        kind = "idempotent"
    else:
        nilps = sorted(r.nilpotents - {0})
        if not nilps:
            return None
        n = nilps[0]
        nh = GroupRingElem.from_dict(r, g, {h: n})
        u = GroupRingElem.from_dict(r, g, {g.identity: one, h: r.neg(n)})
        uinv = GroupRingElem.one(r, g)
        term = GroupRingElem.one(r, g)
        while True:
            term = gr_multiply(term, nh)
            if not any(term.coeffs):
                break
            uinv = GroupRingElem(r, g, tuple(r.add(x, y) for x, y in zip(uinv.coeffs, term.coeffs)))
        kind = "nilpotent"
    one_elem = GroupRingElem.one(r, g)
    if gr_multiply(u, uinv) != one_elem or gr_multiply(uinv, u) != one_elem:
        raise AssertionError("witness does not invert")
    if is_trivial_unit(u):
        raise AssertionError("witness is a trivial unit")
    return UnitWitness(u, uinv, kind)
