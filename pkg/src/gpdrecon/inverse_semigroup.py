"""Finite inverse semigroups stored by multiplication table.

Elements are indices ``0..n-1``; ``labels`` carries whatever objects they stand
for (bisections, algebra elements, congruence classes).  The natural partial
order, compatibility, joins/meets, normal subsemigroups and the
idempotent-separating congruence of a kernel all work on indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import kernels
from .group_ring import CapacityError, GradingGroup

MAX_SEMIGROUP_SIZE = 2000


class SemigroupError(ValueError):
    """Invalid inverse-semigroup data; ``witness`` names the offending elements."""

    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


class InvSemigroup:
    def __init__(self, labels: Sequence[Hashable], table, zero: int | None = None,
                 grading: dict[int, int] | None = None,
                 grading_group: GradingGroup | None = None, validate: bool = True):
        n = len(labels)
        if n > MAX_SEMIGROUP_SIZE:
            raise CapacityError(f"inverse semigroup of size {n} exceeds cap {MAX_SEMIGROUP_SIZE}")
        self.labels = list(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.table = np.ascontiguousarray(table, dtype=np.int32)
        self.n = n
        self.zero = zero
        self.grading = grading
        self.grading_group = grading_group
        if self.table.shape != (n, n):
            raise SemigroupError("table shape does not match element count")
        self.star = self._compute_star(validate)
        self.idempotents = [s for s in range(n) if self.table[s, s] == s]
        self._leq = None
        self._idem_set = frozenset(self.idempotents)
        if validate:
            self.validate()

    # -- construction -----------------------------------------------------
    def _compute_star(self, strict: bool) -> list[int]:
        t = self.table
        star = []
        for s in range(self.n):
            row_s = t[s]
            cands = [x for x in range(self.n) if t[row_s[x], s] == s and t[t[x, s], x] == x]
            if not cands:
                raise SemigroupError("element has no inverse", s)
            if strict and len(cands) != 1:
                raise SemigroupError("inverse is not unique", (s, cands))
            star.append(cands[0])
        return star

    def validate(self) -> None:
        t = self.table
        if ((t < 0) | (t >= self.n)).any():
            raise SemigroupError("table entry out of range")
        bad = kernels.first_nonassociative(t)
        if bad is not None:
            raise SemigroupError("multiplication is not associative", bad)
        idem = self.idempotents
        for e in idem:
            for f in idem:
                if t[e, f] != t[f, e]:
                    raise SemigroupError("idempotents do not commute", (e, f))
        if self.zero is not None:
            z = self.zero
            if not ((t[z, :] == z).all() and (t[:, z] == z).all()):
                raise SemigroupError("zero is not absorbing", z)
        if self.grading is not None and not check_partial_hom(self, self.grading,
                                                              self.grading_group):
            raise SemigroupError("grading is not a partial homomorphism")

    @classmethod
    def from_closure(cls, generators: Iterable[Hashable], mul: Callable, star: Callable,
                     zero: Hashable | None = None, sort_key=None,
                     grade: Callable | None = None, grading_group=None,
                     cap: int = MAX_SEMIGROUP_SIZE, validate: bool = True) -> "InvSemigroup":
        """Saturate ``generators`` under ``mul`` and ``star``.

        ``grade`` maps a nonzero label to its grade when the result is graded.
        """
        elems: list = []
        seen: set = set()

        def add(x):
            if x not in seen:
                if len(elems) >= cap:
                    raise CapacityError(f"closure exceeds {cap} elements")
                seen.add(x)
                elems.append(x)

        for g in generators:
            add(g)
            add(star(g))
        if zero is not None:
            add(zero)
        frontier = list(elems)
        while frontier:
            new = []
            current = list(elems)
            for a in frontier:
                for b in current:
                    for p in (mul(a, b), mul(b, a)):
                        if p not in seen:
                            add(p)
                            new.append(p)
                            s = star(p)
                            if s not in seen:
                                add(s)
                                new.append(s)
            frontier = new
        if sort_key is not None:
            elems.sort(key=sort_key)
        index = {x: i for i, x in enumerate(elems)}
        table = [[index[mul(a, b)] for b in elems] for a in elems]
        z = index[zero] if zero is not None else None
        grading = None
        if grade is not None:
            grading = {i: grade(x) for i, x in enumerate(elems) if i != z}
        return cls(elems, table, z, grading, grading_group, validate=validate)

    # -- basic structure --------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def is_idempotent(self, s: int) -> bool:
        return s in self._idem_set

    def dom(self, s: int) -> int:
        return int(self.table[self.star[s], s])

    def ran(self, s: int) -> int:
        return int(self.table[s, self.star[s]])

    @property
    def leq_matrix(self) -> np.ndarray:
        """``M[s, t]`` is true iff ``s <= t``; uses ``s <= t  <=>  s = t s*s``."""
        if getattr(self, "_leq", None) is None:
            dom = np.array([self.dom(s) for s in range(self.n)], dtype=np.intp)
            m = self.table[:, dom]  # m[t, s] = t . s*s
            self._leq = (m == np.arange(self.n)[None, :]).T.copy()
        return self._leq

    def nonzero(self) -> list[int]:
        return [s for s in range(self.n) if s != self.zero]

    def grade(self, s: int):
        return None if self.grading is None or s == self.zero else self.grading[s]

    def subsemigroup(self, members: Iterable[int], check: bool = True):
        """Inverse subsemigroup on ``members``; returns ``(T, embedding)``."""
        members = sorted(set(members))
        pos = {s: i for i, s in enumerate(members)}
        table = []
        for a in members:
            row = []
            for b in members:
                p = self.mul(a, b)
                if p not in pos:
                    raise SemigroupError("subset not closed under multiplication", (a, b))
                row.append(pos[p])
            table.append(row)
        for a in members:
            if self.star[a] not in pos:
                raise SemigroupError("subset not closed under involution", a)
        grading = None
        if self.grading is not None:
            grading = {pos[s]: self.grading[s] for s in members if s != self.zero}
        z = pos.get(self.zero) if self.zero is not None else None
        sub = InvSemigroup([self.labels[s] for s in members], table, z, grading,
                           self.grading_group, validate=check)
        return sub, members


# -- order-theoretic operations ---------------------------------------------

def natural_leq(S: InvSemigroup, s: int, t: int) -> bool:
    """``s <= t`` iff ``s = t e`` for some idempotent ``e``."""
    return bool(S.leq_matrix[s, t])


def is_compatible(S: InvSemigroup, s: int, t: int) -> bool:
    return S.is_idempotent(S.mul(s, S.star[t])) and S.is_idempotent(S.mul(S.star[t], s))


def upper_bounds(S: InvSemigroup, s: int, t: int) -> list[int]:
    M = S.leq_matrix
    return np.flatnonzero(M[s] & M[t]).tolist()


def lower_bounds(S: InvSemigroup, s: int, t: int) -> list[int]:
    M = S.leq_matrix
    return np.flatnonzero(M[:, s] & M[:, t]).tolist()


def join(S: InvSemigroup, s: int, t: int) -> int | None:
    """Least upper bound of a compatible pair, or ``None`` if it does not exist."""
    if not is_compatible(S, s, t):
        raise SemigroupError("join of an incompatible pair", (s, t))
    ups = upper_bounds(S, s, t)
    sub = S.leq_matrix[np.ix_(ups, ups)]
    least = [u for i, u in enumerate(ups) if sub[i].all()]
    return least[0] if least else None


def meet(S: InvSemigroup, s: int, t: int) -> int | None:
    lows = lower_bounds(S, s, t)
    sub = S.leq_matrix[np.ix_(lows, lows)]
    greatest = [u for i, u in enumerate(lows) if sub[:, i].all()]
    return greatest[0] if greatest else None


def is_full(S: InvSemigroup, members) -> bool:
    return set(S.idempotents) <= set(members)


def is_order_ideal(S: InvSemigroup, members) -> bool:
    members = set(members)
    M = S.leq_matrix
    return all(int(s) in members for t in members for s in np.flatnonzero(M[:, t]))


# -- congruences --------------------------------------------------------------

@dataclass
class Congruence:
    classes: list[list[int]]
    class_of: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.class_of:
            n = sum(len(c) for c in self.classes)
            self.class_of = [0] * n
            for i, c in enumerate(self.classes):
                for s in c:
                    self.class_of[s] = i

    def related(self, s: int, t: int) -> bool:
        return self.class_of[s] == self.class_of[t]


def congruence_from_kernel(S: InvSemigroup, K: Iterable[int]) -> Congruence:
    """The idempotent-separating congruence ``s ~ t`` iff ``s*s = t*t`` and ``st* in K``."""
    K = set(K)
    for a in K:
        for b in K:
            if S.mul(a, b) not in K:
                raise SemigroupError("kernel not closed under multiplication", (a, b))
        if S.star[a] not in K:
            raise SemigroupError("kernel not closed under involution", a)
    missing = [e for e in S.idempotents if e not in K]
    if missing:
        raise SemigroupError("kernel is not full", missing[0])
    for s in range(S.n):
        for a in K:
            if S.mul(S.mul(s, a), S.star[s]) not in K:
                raise SemigroupError("kernel is not normal (sKs* not in K)", (s, a))
    for a in K:
        if S.dom(a) != S.ran(a):
            raise SemigroupError("kernel element with a*a != aa*", a)
    classes: list[list[int]] = []
    class_of = [-1] * S.n
    for s in range(S.n):
        if class_of[s] >= 0:
            continue
        cls = [t for t in range(s, S.n)
               if class_of[t] < 0 and S.dom(s) == S.dom(t) and S.mul(s, S.star[t]) in K]
        for t in cls:
            class_of[t] = len(classes)
        classes.append(cls)
    cong = Congruence(classes, class_of)
    _verify_congruence(S, cong)
    idem_classes = [class_of[e] for e in S.idempotents]
    if len(set(idem_classes)) != len(idem_classes):
        raise SemigroupError("congruence is not idempotent separating")
    if kernel_of(S, cong) != K:
        raise SemigroupError("congruence kernel differs from K")
    return cong


def _verify_congruence(S: InvSemigroup, cong: Congruence) -> None:
    for cls in cong.classes:
        rep = cls[0]
        for s in cls[1:]:
            for u in range(S.n):
                if not cong.related(S.mul(rep, u), S.mul(s, u)) or \
                        not cong.related(S.mul(u, rep), S.mul(u, s)):
                    raise SemigroupError("relation is not a congruence", (rep, s, u))


def kernel_of(S: InvSemigroup, cong: Congruence) -> set[int]:
    idem_classes = {cong.class_of[e] for e in S.idempotents}
    return {s for s in range(S.n) if cong.class_of[s] in idem_classes}


def equality_congruence(S: InvSemigroup) -> Congruence:
    return Congruence([[s] for s in range(S.n)])


def quotient(S: InvSemigroup, cong: Congruence) -> tuple[InvSemigroup, list[int]]:
    """``S/~`` with labels ``tuple(class)``; returns the quotient and projection."""
    _verify_congruence(S, cong)
    reps = [c[0] for c in cong.classes]
    table = [[cong.class_of[S.mul(a, b)] for b in reps] for a in reps]
    zero = cong.class_of[S.zero] if S.zero is not None else None
    grading = None
    if S.grading is not None:
        grading = {}
        for i, cls in enumerate(cong.classes):
            if i == zero:
                continue
            grades = {S.grading[s] for s in cls}
            if len(grades) == 1:
                grading[i] = grades.pop()
            else:
                grading = None
                break
    Q = InvSemigroup([tuple(c) for c in cong.classes], table, zero, grading,
                     S.grading_group if grading is not None else None)
    return Q, list(cong.class_of)


def check_partial_hom(S: InvSemigroup, theta: dict[int, int], group: GradingGroup) -> bool:
    """``theta(st) = theta(s) theta(t)`` whenever ``st != 0``.

    When it holds, the consequences (idempotents map to 1, ``theta(s*)`` is
    the inverse, ``0 != s <= t`` forces equal grades) are re-checked.
    """
    nz = S.nonzero()
    if any(s not in theta for s in nz):
        return False
    for s in nz:
        for t in nz:
            st = S.mul(s, t)
            if st != S.zero and theta[st] != group.mul(theta[s], theta[t]):
                return False
    for e in S.idempotents:
        if e != S.zero and theta[e] != group.identity:
            raise AssertionError(f"partial homomorphism sends idempotent {e} off the identity")
    for s in nz:
        if theta[S.star[s]] != group.inv(theta[s]):
            raise AssertionError(f"theta(s*) != theta(s)^-1 at {s}")
    for s in nz:
        for t in nz:
            if natural_leq(S, s, t) and theta[s] != theta[t]:
                raise AssertionError(f"order does not preserve grades at {(s, t)}")
    return True


def is_isomorphic_graded(S: InvSemigroup, T: InvSemigroup, mapping: Sequence[int]) -> bool:
    """Check that ``mapping`` (index -> index) is a graded isomorphism."""
    if S.n != T.n or sorted(mapping) != list(range(T.n)):
        return False
    for a in range(S.n):
        for b in range(S.n):
            if mapping[S.mul(a, b)] != T.mul(mapping[a], mapping[b]):
                return False
    if (S.zero is None) != (T.zero is None):
        return False
    if S.zero is not None and mapping[S.zero] != T.zero:
        return False
    if S.grading is not None and T.grading is not None:
        return all(S.grading[s] == T.grading[mapping[s]] for s in S.nonzero())
    return True
