import pytest
from hypothesis import given, strategies as st

import oracles
from gpdrecon.coeff_ring import Ring, parse_ring
from gpdrecon.group_ring import (CapacityError, FiniteGroup, GradingGroup, GroupRingElem,
                                 gr_multiply, is_trivial_unit, nontrivial_unit_witness,
                                 parse_group, unit_census)

C2 = FiniteGroup.cyclic(2)

# (modulus, group) -> (units, trivial units), fixed by oracles.group_ring_census
CENSUS = {
    (2, "cyclic2"): (2, 2), (3, "cyclic2"): (4, 4), (4, "cyclic2"): (8, 4),
    (6, "cyclic2"): (8, 4), (5, "cyclic2"): (16, 8), (8, "cyclic2"): (32, 8),
    (9, "cyclic2"): (36, 12), (2, "cyclic3"): (3, 3), (3, "cyclic3"): (18, 6),
    (4, "cyclic3"): (24, 6), (2, "klein"): (8, 4),
}


@pytest.mark.parametrize("key", sorted(CENSUS))
def test_census_frozen(key):
    n, gname = key
    census = unit_census(Ring.modular(n), parse_group(gname))
    assert (census.unit_count, census.trivial_count) == CENSUS[key]


def test_census_z4_witnesses():
    census = unit_census(Ring.modular(4), C2)
    assert [str(u) for u in census.nontrivial_witnesses] == ["1+2g", "2+g", "2+3g", "3+2g"]


def test_census_product_ring_matches_modular():
    a = unit_census(Ring.product([2, 3]), C2)
    b = unit_census(Ring.modular(6), C2)
    assert (a.unit_count, a.trivial_count) == (b.unit_count, b.trivial_count)


def test_census_cap():
    with pytest.raises(CapacityError):
        unit_census(Ring.modular(9), FiniteGroup.symmetric(3), cap=1000)


@given(st.sampled_from([2, 3, 4, 5, 6]), st.sampled_from(["cyclic2", "cyclic3"]))
def test_census_matches_oracle(n, gname):
    g = parse_group(gname)
    census = unit_census(Ring.modular(n), g)
    units, trivial, nontrivial = oracles.group_ring_census(g.table, n, g.identity)
    assert (census.unit_count, census.trivial_count) == (units, trivial)
    assert [u.coeffs for u in census.nontrivial_witnesses] == nontrivial


@given(st.sampled_from(["cyclic3", "klein", "sym3"]), st.data())
def test_group_ring_associative(gname, data):
    g = parse_group(gname)
    r = Ring.modular(4)
    elems = [GroupRingElem(r, g, tuple(data.draw(st.lists(st.integers(0, 3), min_size=g.order,
                                                          max_size=g.order))))
             for _ in range(3)]
    a, b, c = elems
    assert gr_multiply(gr_multiply(a, b), c) == gr_multiply(a, gr_multiply(b, c))


def test_trivial_unit():
    r = Ring.modular(4)
    assert is_trivial_unit(GroupRingElem(r, C2, (0, 3)))
    assert not is_trivial_unit(GroupRingElem(r, C2, (0, 2)))
    assert not is_trivial_unit(GroupRingElem(r, C2, (1, 2)))


@pytest.mark.parametrize("ring, kind", [("mod6", "idempotent"), ("mod4", "nilpotent"),
                                        ("2x3", "idempotent"), ("2x2", "idempotent"),
                                        ("mod9", "nilpotent")])
@pytest.mark.parametrize("gname", ["cyclic2", "cyclic3", "klein", "sym3"])
def test_witness_is_nontrivial_unit(ring, kind, gname):
    r, g = parse_ring(ring), parse_group(gname)
    w = nontrivial_unit_witness(r, g)
    assert w.construction == kind
    one = GroupRingElem.one(r, g)
    assert gr_multiply(w.unit, w.inverse) == one == gr_multiply(w.inverse, w.unit)
    assert not is_trivial_unit(w.unit)


def test_witness_absent_for_good_rings():
    assert nontrivial_unit_witness(Ring.modular(5), C2) is None
    with pytest.raises(ValueError):
        nontrivial_unit_witness(Ring.modular(4), FiniteGroup.trivial())


def test_z4_witness_is_one_minus_2g():
    w = nontrivial_unit_witness(Ring.modular(4), C2)
    assert str(w.unit) == "1+2g"


@pytest.mark.parametrize("spec, order", [({"cyclic": 4}, 4), ("klein", 4), ("sym3", 6),
                                         ({"table": [[0, 1], [1, 0]]}, 2),
                                         ({"product": ["cyclic2", "cyclic3"]}, 6),
                                         ({"trivial": True}, 1)])
def test_parse_group(spec, order):
    assert parse_group(spec).order == order


@pytest.mark.parametrize("table", [[[0, 1], [0, 1]], [[0, 1, 2], [1, 0, 2], [2, 2, 0]], []])
def test_bad_group_tables(table):
    with pytest.raises(ValueError):
        FiniteGroup(table)


def test_grading_groups():
    z = GradingGroup.integers()
    assert z.mul(2, -5) == -3 and z.inv(4) == -4 and z.identity == 0
    f = GradingGroup.finite(FiniteGroup.cyclic(3))
    assert f.mul(1, 2) == 0 and f.inv(1) == 2 and f.label(1) == "g"
    assert GradingGroup.from_spec(f.spec()) == f
    assert GradingGroup.from_spec(z.spec()) == z
    assert not f.contains(3) and z.contains(-7) and not z.contains(True)
