import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from gpdrecon.coeff_ring import Ring, parse_ring
from gpdrecon.convolution import (AlgebraPresentation, PresentationError, centralizer_of_diagonal,
                                  char, check_unit_cocycle, convolve, diagonal,
                                  export_presentation, is_diag_maximal_commutative,
                                  presentation_centralizer, restrict_to_invariant, sample_sigma,
                                  scramble, unit_element, verify_isomorphism)
from gpdrecon.groupoid import GroupoidError, random_automorphism
from gpdrecon.instances import load_corpus

CORPUS = load_corpus()
GROUPOIDS = {n: s for n, s in CORPUS.items() if s.groupoid is not None}
SMALL = ["c2", "c2_graded", "pair2", "unit3", "bundle_c2_triv", "leavitt_a2", "c3"]


def elements(G, ring):
    return st.lists(st.sampled_from(sorted(ring.elements())), min_size=G.n_arrows,
                    max_size=G.n_arrows).map(tuple)


@pytest.mark.parametrize("name", ["pair2", "c3", "leavitt_a3", "bundle_c2_c2"])
@settings(max_examples=25)
@given(data=st.data())
def test_convolution_associative_and_unital(name, data):
    G = GROUPOIDS[name].groupoid
    ring = Ring.modular(4)
    f, g, h = (data.draw(elements(G, ring)) for _ in range(3))
    assert convolve(G, ring, convolve(G, ring, f, g), h) == convolve(G, ring, f, convolve(G, ring, g, h))
    one = unit_element(G, ring)
    assert convolve(G, ring, one, f) == f == convolve(G, ring, f, one)


@pytest.mark.parametrize("name", SMALL)
def test_convolution_matches_oracle_tensor(name):
    G = GROUPOIDS[name].groupoid
    alg = oracles.Algebra.of(G, None, 3)
    rng = random.Random(name)
    ring = Ring.modular(3)
    for _ in range(20):
        f = tuple(rng.randrange(3) for _ in range(G.n_arrows))
        g = tuple(rng.randrange(3) for _ in range(G.n_arrows))
        want = alg.mul(np.array([f]), np.array([g]))[0]
        assert convolve(G, ring, f, g) == tuple(int(x) for x in want)


def test_characteristic_functions_multiply_like_bisections():
    G = GROUPOIDS["pair2"].groupoid
    ring = Ring.modular(2)
    for a in range(G.n_arrows):
        for b in range(G.n_arrows):
            ab = G.mul(a, b)
            want = char(G, ring, [ab] if ab >= 0 else [])
            assert convolve(G, ring, char(G, ring, [a]), char(G, ring, [b])) == want


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_centralizer_size_against_oracle(name, n):
    G = GROUPOIDS[name].groupoid
    res = centralizer_of_diagonal(G, Ring.modular(n))
    want = oracles.centralizer_size(oracles.Algebra.of(G, None, n))
    assert res.linear.size == want == n ** len(G.isotropy_arrows())
    assert res.agree


def test_maximal_commutative_only_when_effective():
    assert is_diag_maximal_commutative(GROUPOIDS["pair3"].groupoid, Ring.modular(6))
    assert not is_diag_maximal_commutative(GROUPOIDS["c2"].groupoid, Ring.modular(2))
    G = GROUPOIDS["pair2"].groupoid
    assert diagonal(G, Ring.modular(5)).size == 25


def test_restrict_to_invariant():
    G = GROUPOIDS["union_pair2_c2"].groupoid
    f = tuple(1 for _ in range(G.n_arrows))
    H, g = restrict_to_invariant(G, f, [0, 1])
    assert H.n_arrows == 4 and g == (1, 1, 1, 1)
    with pytest.raises(GroupoidError):
        restrict_to_invariant(GROUPOIDS["pair2"].groupoid, (0,) * 4, [0])


class TestPresentation:
    @pytest.mark.parametrize("name", SMALL)
    def test_round_trip(self, name):
        spec = GROUPOIDS[name]
        p = export_presentation(spec.groupoid, spec.cocycle, spec.ring)
        p.validate()
        q = AlgebraPresentation.loads(p.dumps())
        assert q.to_dict() == p.to_dict()
        assert q.dumps() == p.dumps()

    def test_rejects_nonassociative(self):
        # in C3 send a*b to a instead of e, leaving b*a = e
        p = export_presentation(GROUPOIDS["c3"].groupoid, None, Ring.modular(3))
        d = p.to_dict()
        d["constants"] = [t for t in d["constants"] if t[:2] != [1, 2]] + [[1, 2, 1, 1]]
        with pytest.raises(PresentationError, match="associative"):
            AlgebraPresentation.from_dict(d)

    def test_rejects_out_of_range_constant(self):
        d = export_presentation(GROUPOIDS["c2"].groupoid, None, Ring.modular(3)).to_dict()
        d["constants"][0][3] = 7
        with pytest.raises(PresentationError):
            AlgebraPresentation.from_dict(d)

    def test_rejects_grade_violation(self):
        spec = GROUPOIDS["c2_graded"]
        d = export_presentation(spec.groupoid, spec.cocycle, Ring.modular(4)).to_dict()
        d["grades"] = [1, 1]
        with pytest.raises(PresentationError):
            AlgebraPresentation.from_dict(d)

    def test_rejects_noncommutative_diagonal(self):
        d = export_presentation(GROUPOIDS["pair2"].groupoid, None, Ring.modular(2)).to_dict()
        d["diagonal"] = list(range(d["dim"]))
        with pytest.raises(PresentationError):
            AlgebraPresentation.from_dict(d)

    def test_rejects_wrong_format(self):
        with pytest.raises(PresentationError):
            AlgebraPresentation.from_dict({"format": "other"})
        with pytest.raises(PresentationError):
            AlgebraPresentation.from_dict({"format": "gpdrecon-presentation"})

    def test_dumps_is_canonical_json(self):
        p = export_presentation(GROUPOIDS["pair2"].groupoid, None, Ring.modular(2))
        text = p.dumps()
        assert text == json.dumps(json.loads(text), sort_keys=True, separators=(",", ":")) + "\n"


class TestScramble:
    @pytest.mark.parametrize("name", SMALL + ["leavitt_v"])
    @pytest.mark.parametrize("seed", range(3))
    def test_scramble_is_isomorphism(self, name, seed):
        spec = GROUPOIDS[name]
        ring = spec.ring if spec.ring.size ** 4 < 10**4 else Ring.modular(2)
        rng = random.Random(seed)
        p = export_presentation(spec.groupoid, spec.cocycle, ring)
        phi = random_automorphism(spec.groupoid, spec.cocycle, rng)
        sigma = sample_sigma(spec.groupoid, ring, rng)
        for mix in (False, True):
            s = scramble(p, spec.groupoid, phi, sigma, seed, mix=mix)
            assert verify_isomorphism(p, s.presentation, s.matrix)
            assert s.presentation.meta["mix"] is mix

    def test_same_seed_same_output(self):
        spec = GROUPOIDS["pair2"]
        ring = Ring.modular(3)
        outs = []
        for _ in range(2):
            rng = random.Random(11)
            p = export_presentation(spec.groupoid, None, ring)
            phi = random_automorphism(spec.groupoid, None, rng)
            sigma = sample_sigma(spec.groupoid, ring, rng)
            outs.append(scramble(p, spec.groupoid, phi, sigma, 11, mix=True).presentation.dumps())
        assert outs[0] == outs[1]

    def test_bad_sigma_rejected(self):
        G = GROUPOIDS["pair2"].groupoid
        ring = Ring.modular(3)
        p = export_presentation(G, None, ring)
        sigma = [ring.one] * G.n_arrows
        off = next(a for a in range(G.n_arrows) if not G.is_unit(a))
        sigma[off] = 2  # leaves its inverse at 1, so the cocycle law fails
        assert check_unit_cocycle(G, ring, sigma) is not None
        with pytest.raises(PresentationError):
            scramble(p, G, list(range(G.n_arrows)), sigma, 0)

    def test_non_functor_rejected(self):
        G = GROUPOIDS["pair2"].groupoid
        ring = Ring.modular(2)
        p = export_presentation(G, None, ring)
        swap = list(range(G.n_arrows))
        u = G.unit[0]
        off = next(a for a in range(G.n_arrows) if not G.is_unit(a))
        swap[u], swap[off] = off, u
        with pytest.raises(PresentationError):
            scramble(p, G, swap, [1] * G.n_arrows, 0)

    @pytest.mark.parametrize("r", ["mod3", "mod4", "mod5", "2x2"])
    def test_sample_sigma_is_cocycle(self, r):
        ring = parse_ring(r)
        for name in ("c3", "pair2", "bundle_c2_triv"):
            sigma = sample_sigma(GROUPOIDS[name].groupoid, ring, random.Random(r + name))
            assert check_unit_cocycle(GROUPOIDS[name].groupoid, ring, sigma) is None

    def test_centralizer_invariant_under_scramble(self):
        spec = GROUPOIDS["bundle_c2_triv"]
        ring = Ring.modular(4)
        p = export_presentation(spec.groupoid, None, ring)
        rng = random.Random(3)
        s = scramble(p, spec.groupoid, random_automorphism(spec.groupoid, None, rng),
                     sample_sigma(spec.groupoid, ring, rng), 3, mix=True)
        assert presentation_centralizer(s.presentation).size == presentation_centralizer(p).size == 4**3
