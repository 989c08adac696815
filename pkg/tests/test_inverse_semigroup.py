import itertools
import math

import pytest
from hypothesis import given, strategies as st

from gpdrecon.group_ring import FiniteGroup, GradingGroup
from gpdrecon.inverse_semigroup import (InvSemigroup, SemigroupError, check_partial_hom,
                                        congruence_from_kernel, equality_congruence, is_compatible,
                                        is_full, is_order_ideal, join, kernel_of, lower_bounds,
                                        meet, natural_leq, quotient)


def partial_bijections(n):
    """All partial bijections of an n-set as frozensets of (x, f(x))."""
    out = []
    for k in range(n + 1):
        for dom in itertools.combinations(range(n), k):
            for img in itertools.permutations(range(n), k):
                out.append(frozenset(zip(dom, img)))
    return out


def compose(f, g):
    """f after g."""
    fd = dict(f)
    return frozenset((x, fd[y]) for x, y in g if y in fd)


def star(f):
    return frozenset((y, x) for x, y in f)


def symmetric_inverse_monoid(n, generators=None):
    gens = generators if generators is not None else partial_bijections(n)
    return InvSemigroup.from_closure(gens, compose, star, zero=frozenset(),
                                     sort_key=lambda f: (len(f), sorted(f)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symmetric_inverse_monoid_size(n):
    S = symmetric_inverse_monoid(n)
    assert S.n == sum(math.comb(n, k) ** 2 * math.factorial(k) for k in range(n + 1))
    assert len(S.idempotents) == 2 ** n


def test_star_is_partial_inverse():
    S = symmetric_inverse_monoid(3)
    for s in range(S.n):
        assert S.labels[S.star[s]] == star(S.labels[s])


def test_natural_order_is_restriction():
    S = symmetric_inverse_monoid(3)
    for s in range(S.n):
        for t in range(S.n):
            assert natural_leq(S, s, t) == (S.labels[s] <= S.labels[t])


def test_meet_and_join_in_I3():
    S = symmetric_inverse_monoid(3)
    for s in range(S.n):
        for t in range(S.n):
            m = meet(S, s, t)
            assert S.labels[m] == S.labels[s] & S.labels[t]
            if is_compatible(S, s, t):
                j = join(S, s, t)
                union = S.labels[s] | S.labels[t]
                assert j is not None and S.labels[j] == union
            else:
                with pytest.raises(SemigroupError):
                    join(S, s, t)


@given(st.lists(st.sampled_from(partial_bijections(3)), min_size=1, max_size=3))
def test_closure_is_inverse_semigroup(gens):
    S = symmetric_inverse_monoid(3, gens)
    for s in range(S.n):
        x = S.star[s]
        assert S.mul(S.mul(s, x), s) == s and S.mul(S.mul(x, s), x) == x
    E = S.idempotents
    assert all(S.mul(e, f) == S.mul(f, e) for e in E for f in E)
    for s in range(S.n):
        lows = lower_bounds(S, s, s)
        assert s in lows


def test_group_with_zero_congruences():
    # C2 with an adjoined zero: elements 0, 1, g
    S = InvSemigroup(["0", "1", "g"], [[0, 0, 0], [0, 1, 2], [0, 2, 1]], zero=0)
    whole = congruence_from_kernel(S, {0, 1, 2})
    assert sorted(map(sorted, whole.classes)) == [[0], [1, 2]]
    Q, proj = quotient(S, whole)
    assert Q.n == 2 and proj == [0, 1, 1]
    trivial = congruence_from_kernel(S, {0, 1})
    assert trivial.classes == equality_congruence(S).classes
    assert kernel_of(S, whole) == {0, 1, 2}


def test_kernel_must_be_full_and_normal():
    S = symmetric_inverse_monoid(2)
    with pytest.raises(SemigroupError):
        congruence_from_kernel(S, {S.zero})
    E = set(S.idempotents)
    cong = congruence_from_kernel(S, E)
    assert all(len(c) == 1 for c in cong.classes)


def test_rejects_bad_tables():
    with pytest.raises(SemigroupError):  # not associative
        InvSemigroup(["a", "b"], [[1, 0], [0, 0]])
    with pytest.raises(SemigroupError):  # left-zero band: inverses not unique
        InvSemigroup(["a", "b"], [[0, 0], [1, 1]])
    with pytest.raises(SemigroupError):  # zero not absorbing
        InvSemigroup(["0", "1"], [[0, 1], [1, 1]], zero=0)


def test_grading_partial_hom():
    c2 = GradingGroup.finite(FiniteGroup.cyclic(2))
    table = [[0, 0, 0], [0, 1, 2], [0, 2, 1]]
    S = InvSemigroup(["0", "1", "g"], table, zero=0, grading={1: 0, 2: 1}, grading_group=c2)
    assert check_partial_hom(S, S.grading, c2)
    assert not check_partial_hom(S, {1: 1, 2: 1}, c2)
    with pytest.raises(SemigroupError):
        InvSemigroup(["0", "1", "g"], table, zero=0, grading={1: 1, 2: 0}, grading_group=c2)


def test_full_and_order_ideal():
    S = symmetric_inverse_monoid(2)
    assert is_full(S, S.idempotents)
    assert is_order_ideal(S, S.idempotents)
    top = [s for s in range(S.n) if len(S.labels[s]) == 2]
    assert not is_order_ideal(S, top)


def test_subsemigroup():
    S = symmetric_inverse_monoid(2)
    sub, members = S.subsemigroup(S.idempotents)
    assert sub.n == 4 and all(sub.is_idempotent(i) for i in range(sub.n))
    units, _ = S.subsemigroup([s for s in range(S.n) if len(S.labels[s]) == 2])
    assert units.n == 2 and units.zero is None
    with pytest.raises(SemigroupError):  # the product of the two atoms is empty
        S.subsemigroup([s for s in range(S.n) if len(S.labels[s]) == 1 and S.is_idempotent(s)])
