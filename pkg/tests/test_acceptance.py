"""The twelve acceptance criteria, one test each.

A pass/fail line per criterion is printed in the terminal summary (see
conftest).  Expected numbers come from ``oracles`` runs and are frozen here.
"""
import functools
import random

import pytest

import oracles
from gpdrecon.coeff_ring import Ring, parse_ring
from gpdrecon.convolution import (centralizer_of_diagonal, export_presentation,
                                  is_diag_maximal_commutative, sample_sigma, scramble)
from gpdrecon.germ import full_pipeline, reconstruct_from_bisections
from gpdrecon.group_ring import (GroupRingElem, gr_multiply, is_trivial_unit,
                                 nontrivial_unit_witness, parse_group, unit_census)
from gpdrecon.groupoid import (Cocycle, binary_meets_check, bisections, graded_iso_search, is_effective,
                               random_automorphism)
from gpdrecon.instances import CORPUS_GROUPS, CORPUS_RINGS, load_corpus
from gpdrecon.leavitt import (arrow_count_formula, condition_L, path_groupoid,
                              verify_ck_relations)
from gpdrecon.normalizer import (LBHError, compute_N_bruteforce, compute_N_generated,
                                 format_element, lbh_check, lbh_via_isotropy, psi_check,
                                 structure_checks)

CORPUS = load_corpus()
GROUPOIDS = {n: s for n, s in CORPUS.items() if s.groupoid is not None}
ACYCLIC_GRAPHS = ["leavitt_a2", "leavitt_v", "leavitt_parallel", "leavitt_a3"]
FIBER_CAP = 10**4
SEEDS = range(5)


def _fiber_dim(spec):
    c = spec.cocycle
    if c is None:
        return spec.groupoid.n_arrows
    return max(len(v) for v in c.fibers().values())


def _grid():
    """(name, ring) pairs over indecomposable rings whose largest fiber is enumerable."""
    out = []
    for name, spec in GROUPOIDS.items():
        for r in ("mod2", "mod3", "mod4"):
            ring = parse_ring(r)
            if ring.size ** _fiber_dim(spec) <= FIBER_CAP:
                out.append((name, r))
    return out


GRID = _grid()


@functools.lru_cache(maxsize=None)
def brute_N(name, r):
    spec = GROUPOIDS[name]
    return compute_N_bruteforce(export_presentation(spec.groupoid, spec.cocycle, parse_ring(r)),
                                FIBER_CAP)


@functools.lru_cache(maxsize=None)
def lbh(name, r):
    spec = GROUPOIDS[name]
    p = export_presentation(spec.groupoid, spec.cocycle, parse_ring(r))
    return lbh_check(p, spec.groupoid, N=brute_N(name, r))


def _scrambled(spec, ring, seed):
    rng = random.Random(seed)
    p = export_presentation(spec.groupoid, spec.cocycle, ring)
    phi = random_automorphism(spec.groupoid, spec.cocycle, rng)
    sigma = sample_sigma(spec.groupoid, ring, rng)
    return scramble(p, spec.groupoid, phi, sigma, seed, mix=True).presentation


@pytest.mark.acceptance(1, "unit censuses match the brute-force oracle")
def test_unit_censuses():
    c2 = parse_group("cyclic2")
    expected = {2: (2, 0), 3: (4, 0), 4: (8, 4), 6: (8, 4)}
    for n, (units, nontrivial) in expected.items():
        census = unit_census(Ring.modular(n), c2)
        assert (census.unit_count, census.nontrivial_count) == (units, nontrivial)
        o_units, o_trivial, o_nontrivial = oracles.group_ring_census(c2.table, n, c2.identity)
        assert (o_units, o_units - o_trivial) == (units, nontrivial)
        assert sorted(u.coeffs for u in census.nontrivial_witnesses) == o_nontrivial
    z6 = unit_census(Ring.modular(6), c2)
    assert "3+4g" in {str(u) for u in z6.nontrivial_witnesses}


@pytest.mark.acceptance(2, "nontrivial unit witness for every bad ring and nontrivial group")
def test_witness_grid():
    cells = 0
    for r in CORPUS_RINGS:
        ring = parse_ring(r)
        if ring.is_reduced() and ring.is_indecomposable():
            continue
        for gname in CORPUS_GROUPS:
            g = parse_group(gname)
            w = nontrivial_unit_witness(ring, g)
            assert w is not None, (r, gname)
            one = GroupRingElem.one(ring, g)
            assert gr_multiply(w.unit, w.inverse) == one
            assert gr_multiply(w.inverse, w.unit) == one
            assert not is_trivial_unit(w.unit)
            cells += 1
    assert cells == 6 * len(CORPUS_GROUPS)  # Z/4, Z/6, Z/8, Z/9, Z/2xZ/2, Z/2xZ/3


@pytest.mark.acceptance(3, "centralizer of the diagonal equals the isotropy span")
def test_centralizer():
    pairs = 0
    for spec in GROUPOIDS.values():
        for r in ("mod2", "mod3", "mod4", "mod6"):
            res = centralizer_of_diagonal(spec.groupoid, parse_ring(r), brute_cap=10**5)
            assert res.linear == res.isotropy_span, (spec.name, r)
            assert res.agree, (spec.name, r)
            pairs += 1
    assert pairs >= 12


@pytest.mark.acceptance(4, "effective iff the diagonal is maximal commutative")
def test_effectiveness_detection():
    mismatches = [(spec.name, r) for spec in GROUPOIDS.values()
                  for r in ("mod2", "mod3", "mod4", "mod6")
                  if is_effective(spec.groupoid)
                  != is_diag_maximal_commutative(spec.groupoid, parse_ring(r))]
    assert mismatches == []
    effective = {n for n, s in GROUPOIDS.items() if is_effective(s.groupoid)}
    assert {"pair2", "pair3", "unit3", "leavitt_a2"} <= effective
    assert not effective & {"c2", "klein", "bundle_c2_c2", "prod_pair2_c2"}


@pytest.mark.acceptance(5, "brute-force and generated normalizers agree under LBH")
def test_normalizer_engines():
    compared = 0
    for name, r in GRID:
        spec = GROUPOIDS[name]
        Nb = brute_N(name, r)
        Ng = compute_N_generated(spec.groupoid, spec.cocycle, parse_ring(r))
        assert Ng.as_set() <= Nb.as_set(), (name, r)
        if lbh(name, r).holds:
            assert Ng.as_set() == Nb.as_set(), (name, r)
            compared += 1
    assert compared >= 20
    assert brute_N("c2", "mod2").size == 3
    assert brute_N("c2", "mod4").size == 9
    assert brute_N("pair2", "mod2").size == 7
    assert brute_N("pair2", "mod4").size == 17


@pytest.mark.acceptance(6, "normalizer structure checks hold on every computed N")
def test_structure_suite():
    failures = []
    for name, r in GRID:
        for check in structure_checks(brute_N(name, r), GROUPOIDS[name].groupoid):
            if not check.passed:
                failures.append((name, r, check.name, check.witness))
    assert failures == []


@pytest.mark.acceptance(7, "LBH: normalizer test matches isotropy test, witness, scramble invariance")
def test_lbh_equivalences():
    for name, r in GRID:
        spec = GROUPOIDS[name]
        via_iso = lbh_via_isotropy(spec.groupoid, spec.cocycle, parse_ring(r))
        assert lbh(name, r).holds == via_iso.holds, (name, r)
    verdict = lbh("c2", "mod4")
    assert not verdict.holds
    labels = [str(a) for a in GROUPOIDS["c2"].groupoid.arrows]
    assert format_element(verdict.witness, labels) in ("1+2g", "1-2g")
    for name, spec in GROUPOIDS.items():
        ring = spec.ring
        if not ring.is_indecomposable() or ring.size ** _fiber_dim(spec) > FIBER_CAP:
            continue
        base = lbh(name, {2: "mod2", 3: "mod3", 4: "mod4"}[ring.size]).holds
        for seed in SEEDS:
            assert lbh_check(_scrambled(spec, ring, seed)).holds == base, (name, seed)


@pytest.mark.acceptance(8, "psi is injective, and bijective exactly under LBH")
def test_psi_and_quotient():
    for name, r in GRID:
        spec = GROUPOIDS[name]
        rep = psi_check(spec.groupoid, spec.cocycle, parse_ring(r), FIBER_CAP)
        assert rep.injective and rep.homomorphism, (name, r)
        assert rep.surjective == lbh(name, r).holds, (name, r)
        if name == "pair2":
            assert rep.codomain_size == 7


@pytest.mark.acceptance(9, "germ groupoid of the bisections recovers every corpus groupoid")
def test_reconstruct_from_bisections():
    for name, spec in GROUPOIDS.items():
        rec = reconstruct_from_bisections(spec.groupoid, spec.cocycle)
        assert rec.iso is not None, name
    assert any(s.cocycle is not None and s.cocycle.group.kind == "integers"
               for s in GROUPOIDS.values())


@pytest.mark.acceptance(10, "scramble then reconstruct returns the graded groupoid")
def test_round_trip():
    passed = raised = 0
    for name, spec in GROUPOIDS.items():
        ring = spec.ring
        if not ring.is_indecomposable() or ring.size ** _fiber_dim(spec) > FIBER_CAP:
            continue
        holds = lbh(name, {2: "mod2", 3: "mod3", 4: "mod4"}[ring.size]).holds
        for seed in SEEDS:
            q = _scrambled(spec, ring, seed)
            if not holds:
                with pytest.raises(LBHError):
                    full_pipeline(q)
                raised += 1
                continue
            H, cH = full_pipeline(q)
            c = spec.cocycle or Cocycle.trivial(spec.groupoid)
            assert graded_iso_search(H, cH, spec.groupoid, c) is not None, (name, seed)
            passed += 1
    assert passed >= 5 * 10 and raised >= 5
    with pytest.raises(LBHError):
        full_pipeline(_scrambled(GROUPOIDS["c2"], Ring.modular(4), 0))


@pytest.mark.acceptance(11, "Leavitt path groupoids: relations, arrow counts, condition (L), round trip")
def test_leavitt_suite():
    for name in ACYCLIC_GRAPHS:
        E = CORPUS[name].graph or _graph_of(name)
        G, c = path_groupoid(E)
        assert G.n_arrows == arrow_count_formula(E)
        assert condition_L(E)
        for r in ("mod2", "mod3", "mod4"):
            assert all(ch.passed for ch in verify_ck_relations(E, parse_ring(r))), (name, r)
        for r in ("mod2", "mod4"):
            ring = parse_ring(r)
            spec = CORPUS[name]
            q = _scrambled(spec, ring, 7)
            H, cH = full_pipeline(q)
            assert graded_iso_search(H, cH, G, c) is not None, (name, r)
    # hand-enumerated cycles: loop has one cycle and no exit; the rose's two loops exit
    assert CORPUS["graph_loop"].graph.simple_cycles() == [("e",)]
    assert not condition_L(CORPUS["graph_loop"].graph)
    assert sorted(CORPUS["graph_rose"].graph.simple_cycles()) == [("e",), ("f",)]
    assert condition_L(CORPUS["graph_rose"].graph)


def _graph_of(name):
    from gpdrecon.leavitt import DirectedGraph
    return DirectedGraph.from_dict(CORPUS[name].raw["groupoid"]["leavitt"])


@pytest.mark.acceptance(12, "binary meets are intersections in every bisection semigroup")
def test_binary_meets():
    built = 0
    for spec in GROUPOIDS.values():
        for c in {id(None): None, id(spec.cocycle): spec.cocycle}.values():
            S = bisections(spec.groupoid, c)
            assert binary_meets_check(S, spec.groupoid), spec.name
            built += 1
    assert built >= len(GROUPOIDS)
