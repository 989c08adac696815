"""Characters of finite semilattices, spectral actions and groupoids of germs.

On a finite semilattice with zero every filter not containing ``0`` is the
principal filter of its meet, so characters are ``↑e`` for ``e != 0`` and the
ultracharacters are ``↑a`` for atoms ``a``.  The spectrum is nonetheless
computed by checking the character axioms, not by trusting this.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .convolution import AlgebraPresentation
from .group_ring import CapacityError
from .groupoid import (Cocycle, FiniteGroupoid, GroupoidIso, bisections, graded_iso_search,
                       is_graded_iso)
from .inverse_semigroup import InvSemigroup, SemigroupError, check_partial_hom, natural_leq
from .normalizer import LBHError, compute_N_bruteforce, lbh_counting, quotient_N

MAX_SEMILATTICE = 2**16


class ActionError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


@dataclass
class Semilattice:
    """Meet semilattice with zero; ``meet`` is a table on element indices."""

    elements: list
    meet: np.ndarray
    zero: int

    @classmethod
    def of_idempotents(cls, S: InvSemigroup) -> "Semilattice":
        E = list(S.idempotents)
        pos = {e: i for i, e in enumerate(E)}
        table = np.array([[pos[S.mul(e, f)] for f in E] for e in E], dtype=np.int32)
        if S.zero is None:
            raise SemigroupError("semilattice needs a zero")
        return cls(E, table, pos[S.zero])

    @classmethod
    def boolean(cls, n: int) -> "Semilattice":
        """Subsets of an ``n``-point set under intersection."""
        elems = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
        pos = {e: i for i, e in enumerate(elems)}
        table = np.array([[pos[a & b] for b in elems] for a in elems], dtype=np.int32)
        return cls(elems, table, pos[frozenset()])

    @property
    def n(self) -> int:
        return len(self.elements)

    def leq(self, a: int, b: int) -> bool:
        return self.meet[a, b] == a


Character = frozenset  # indices where the character is 1


def is_character(E: Semilattice, tau: frozenset) -> bool:
    if not tau or E.zero in tau:
        return False
    return all((int(E.meet[a, b]) in tau) == (a in tau and b in tau)
               for a in range(E.n) for b in range(E.n))


def spectrum(E: Semilattice, exhaustive: bool = False) -> tuple[list[Character], list[Character]]:
    """``(Spec, Ultra)``.  ``exhaustive=True`` tests every subset (small ``E`` only)."""
    if E.n > MAX_SEMILATTICE:
        raise CapacityError(f"semilattice of size {E.n} exceeds {MAX_SEMILATTICE}")
    if exhaustive:
        if E.n > 16:
            raise CapacityError("subset enumeration limited to 16 elements")
        cands = [frozenset(c) for k in range(1, E.n + 1)
                 for c in itertools.combinations(range(E.n), k)]
    else:
        cands = [frozenset(b for b in range(E.n) if E.leq(a, b))
                 for a in range(E.n) if a != E.zero]
    spec = sorted({t for t in cands if is_character(E, t)}, key=lambda t: (len(t), sorted(t)))
    ultra = [t for t in spec if not any(t < u for u in spec)]
    return spec, ultra


@dataclass
class Action:
    """``S`` acting on ``X`` (ultracharacters) by partial bijections."""

    S: InvSemigroup
    E: Semilattice
    X: list[Character]
    maps: list[dict[int, int]]  # per element of S: point -> point

    def domain(self, s: int) -> list[int]:
        return sorted(self.maps[s])


def spectral_action(S: InvSemigroup) -> Action:
    """``sτ(e) = τ(s*es)`` on ultracharacters in the domain ``D(s*s)``."""
    E = Semilattice.of_idempotents(S)
    _, ultra = spectrum(E)
    pos = {t: i for i, t in enumerate(ultra)}
    eidx = {e: i for i, e in enumerate(E.elements)}
    maps = []
    for s in range(S.n):
        dom_e = eidx[S.dom(s)]
        m = {}
        for i, tau in enumerate(ultra):
            if dom_e not in tau:
                continue
            image = frozenset(eidx[e] for e in E.elements
                              if eidx[S.mul(S.star[s], S.mul(e, s))] in tau)
            if image not in pos:
                raise ActionError("ultracharacters are not invariant", (s, i))
            m[i] = pos[image]
        maps.append(m)
    act = Action(S, E, ultra, maps)
    _check_action(act)
    return act


def _check_action(act: Action) -> None:
    S = act.S
    covered = set()
    for s in range(S.n):
        ms = act.maps[s]
        if len(set(ms.values())) != len(ms):
            raise ActionError("action is not injective", s)
        covered.update(ms)
        for t in range(S.n):
            mt = act.maps[t]
            st = act.maps[S.mul(s, t)]
            comp = {x: ms[mt[x]] for x in mt if mt[x] in ms}
            if comp != st:
                raise ActionError("action is not functorial", (s, t))
    if covered != set(range(len(act.X))):
        raise ActionError("action is degenerate")


def _atom_of(E: Semilattice, tau: Character) -> int:
    """Least element of a (principal) character."""
    for a in tau:
        if all(E.leq(a, b) for b in tau):
            return a
    raise ActionError("character is not principal")


def germ_groupoid(S: InvSemigroup, act: Action, theta: dict[int, int] | None = None,
                  grading_group=None):
    """``S ⋉ X``; returns ``(groupoid, cocycle or None, germ label map)``.

    ``(s, x) ~ (t, x)`` iff some ``u <= s, t`` has ``x`` in its domain.
    """
    M = S.leq_matrix
    npts = len(act.X)
    dom_mask = np.zeros((npts, S.n), dtype=bool)
    for s in range(S.n):
        for x in act.maps[s]:
            dom_mask[x, s] = True
    rep: dict[tuple[int, int], tuple[int, int]] = {}
    labels = []
    for x in range(npts):
        members = [s for s in range(S.n) if dom_mask[x, s]]
        classes: list[list[int]] = []
        for s in members:
            for cls in classes:
                t = cls[0]
                if (M[:, s] & M[:, t] & dom_mask[x]).any():
                    cls.append(s)
                    break
            else:
                classes.append([s])
        for cls in classes:
            key = (min(cls), x)
            labels.append(key)
            for s in cls:
                rep[(s, x)] = key
    labels.sort(key=lambda k: (k[1], k[0]))
    index = {k: i for i, k in enumerate(labels)}
    dom = [x for _, x in labels]
    cod = [act.maps[s][x] for s, x in labels]
    n = len(labels)
    table = np.full((n, n), -1, dtype=np.int32)
    for i, (s, x) in enumerate(labels):
        for j, (t, y) in enumerate(labels):
            if cod[j] == x:
                table[i, j] = index[rep[(S.mul(s, t), y)]]
    G = FiniteGroupoid([f"x{i}" for i in range(npts)], labels, dom, cod, table)
    c = None
    if theta is not None:
        grade = []
        for (s, x) in labels:
            g = theta[s]
            for (t, y), key in rep.items():
                if y == x and key == (s, x) and theta[t] != g:
                    raise ActionError("grading is not constant on a germ", (s, t, x))
            grade.append(g)
        c = Cocycle(grading_group, grade)
        c.validate(G)
    return G, c, {k: index[v] for k, v in rep.items()}


def cofinal_check(S: InvSemigroup, T: Sequence[int], act: Action, compare: bool = True) -> bool:
    """Is the full inverse subsemigroup ``T`` cofinal for the action?

    When it is (and ``compare``), the two germ groupoids are checked to be
    gradedly isomorphic.
    """
    Tset = set(T)
    if not set(S.idempotents) <= Tset:
        raise SemigroupError("T is not full")
    for s in range(S.n):
        for x in act.maps[s]:
            if not any(natural_leq(S, t, s) and x in act.maps[t] for t in Tset):
                return False
    if compare:
        sub, emb = S.subsemigroup(Tset)
        act_T = Action(sub, act.E, act.X, [act.maps[s] for s in emb])
        _check_action(act_T)
        graded = S.grading is not None
        GS, cS, _ = germ_groupoid(S, act, S.grading if graded else None, S.grading_group)
        GT, cT, _ = germ_groupoid(sub, act_T, sub.grading if graded else None, S.grading_group)
        if graded_iso_search(GT, cT, GS, cS) is None:
            raise AssertionError("cofinal subsemigroup gives a non-isomorphic germ groupoid")
    return True


@dataclass
class Reconstruction:
    groupoid: FiniteGroupoid
    cocycle: Cocycle | None
    iso: GroupoidIso | None
    direct_map: list[int] | None = None


def reconstruct_from_bisections(G: FiniteGroupoid, c: Cocycle | None) -> Reconstruction:
    """Germ groupoid of ``Γc^h(G)`` on its ultracharacters, matched back to ``G``."""
    c = c or Cocycle.trivial(G)
    S = bisections(G, c)
    act = spectral_action(S)
    H, cH, germ_of = germ_groupoid(S, act, S.grading, c.group)
    iso = graded_iso_search(H, cH, G, c)
    # direct map: γ -> [{γ}, τ_{d(γ)}], {γ} being the least homogeneous bisection holding γ
    E = act.E
    point_of = {}
    for i, tau in enumerate(act.X):
        U = S.labels[E.elements[_atom_of(E, tau)]]
        (u,) = U
        point_of[G.dom[u]] = i
    direct = [germ_of[(S.index[frozenset([a])], point_of[G.dom[a]])] for a in range(G.n_arrows)]
    if not is_graded_iso(G, c, H, cH, direct):
        raise AssertionError("γ -> [U, τ_d(γ)] is not a graded isomorphism")
    return Reconstruction(H, cH, iso, direct)


def full_pipeline(p: AlgebraPresentation, cap: int | None = None):
    """Reconstruct a graded groupoid from a presentation alone.

    Brute-force ``N``, LBH (hard error with witness on failure), ``N/∼``, its
    spectral action, and the graded germ groupoid.
    """
    if not p.ring.is_indecomposable():
        raise ValueError(f"reconstruction needs an indecomposable ring, got {p.ring!r}")
    N = compute_N_bruteforce(p) if cap is None else compute_N_bruteforce(p, cap)
    verdict = lbh_counting(N)
    if not verdict.holds:
        raise LBHError("local bisection hypothesis fails", verdict.witness)
    qr = quotient_N(N)
    act = spectral_action(qr.Q)
    G, c, _ = germ_groupoid(qr.Q, act, qr.Q.grading, p.grading_group)
    if c is None:
        c = Cocycle(p.grading_group, [p.grading_group.identity] * G.n_arrows)
    if not check_partial_hom(qr.Q, qr.Q.grading, p.grading_group):
        raise AssertionError("quotient grading is not a partial homomorphism")
    return G, c
