import random

import pytest
from hypothesis import given, settings, strategies as st

from gpdrecon.coeff_ring import Ring
from gpdrecon.convolution import export_presentation, sample_sigma, scramble
from gpdrecon.groupoid import Cocycle, bisections, graded_iso_search, random_automorphism
from gpdrecon.inverse_semigroup import SemigroupError
from gpdrecon.germ import (Semilattice, cofinal_check, full_pipeline, germ_groupoid,
                           is_character, reconstruct_from_bisections, spectral_action, spectrum)
from gpdrecon.instances import load_corpus
from gpdrecon.normalizer import LBHError

CORPUS = load_corpus()
GROUPOIDS = {n: s for n, s in CORPUS.items() if s.groupoid is not None}


class TestSpectrum:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_boolean(self, n):
        E = Semilattice.boolean(n)
        spec, ultra = spectrum(E, exhaustive=True)
        # characters of a finite semilattice are the principal filters of nonzero elements
        assert len(spec) == 2**n - 1
        assert len(ultra) == n
        assert spectrum(E) == (spec, ultra)

    @pytest.mark.parametrize("name", ["pair2", "c2", "unit3", "leavitt_a2", "bundle_c2_triv"])
    def test_exhaustive_equals_principal(self, name):
        S = bisections(GROUPOIDS[name].groupoid)
        E = Semilattice.of_idempotents(S)
        assert spectrum(E, exhaustive=True) == spectrum(E)

    def test_zero_is_never_in_a_character(self):
        E = Semilattice.boolean(2)
        assert not is_character(E, frozenset(range(E.n)))
        assert not is_character(E, frozenset())

    def test_ultra_count_is_object_count(self):
        for spec in GROUPOIDS.values():
            S = bisections(spec.groupoid, spec.cocycle)
            _, ultra = spectrum(Semilattice.of_idempotents(S))
            assert len(ultra) == spec.groupoid.n_objects


class TestGerms:
    def test_c2_with_zero(self):
        S = CORPUS["semigroup_c2_zero"].semigroup
        act = spectral_action(S)
        assert len(act.X) == 1
        G, c, _ = germ_groupoid(S, act)
        assert (G.n_objects, G.n_arrows) == (1, 2)
        assert c is None
        assert graded_iso_search(G, None, GROUPOIDS["c2"].groupoid, None) is not None

    @pytest.mark.parametrize("name", sorted(GROUPOIDS))
    def test_reconstruct_from_bisections(self, name):
        spec = GROUPOIDS[name]
        rec = reconstruct_from_bisections(spec.groupoid, spec.cocycle)
        assert rec.iso is not None
        assert rec.groupoid.n_arrows == spec.groupoid.n_arrows

    def test_action_is_functorial(self):
        S = bisections(GROUPOIDS["pair2"].groupoid)
        act = spectral_action(S)
        for s in range(S.n):
            for t in range(S.n):
                composed = {x: act.maps[s][y] for x, y in act.maps[t].items() if y in act.maps[s]}
                assert composed == act.maps[S.mul(s, t)]


class TestCofinal:
    def _singletons(self, S):
        return [i for i, U in enumerate(S.labels) if len(U) <= 1]

    def test_singletons_are_cofinal(self):
        S = bisections(GROUPOIDS["pair2"].groupoid)
        act = spectral_action(S)
        T = sorted(set(self._singletons(S)) | set(S.idempotents))
        assert cofinal_check(S, T, act)

    def test_idempotents_are_not_cofinal(self):
        S = bisections(GROUPOIDS["pair2"].groupoid)
        act = spectral_action(S)
        assert not cofinal_check(S, sorted(S.idempotents), act)

    def test_full_required(self):
        S = bisections(GROUPOIDS["pair2"].groupoid)
        act = spectral_action(S)
        with pytest.raises(SemigroupError):
            cofinal_check(S, [S.zero], act)

    def test_graded_cofinal(self):
        spec = GROUPOIDS["leavitt_a2"]
        S = bisections(spec.groupoid, spec.cocycle)
        act = spectral_action(S)
        assert cofinal_check(S, sorted(set(self._singletons(S)) | set(S.idempotents)), act)


def _scrambled(name, ring, seed):
    spec = GROUPOIDS[name]
    rng = random.Random(seed)
    p = export_presentation(spec.groupoid, spec.cocycle, ring)
    return scramble(p, spec.groupoid, random_automorphism(spec.groupoid, spec.cocycle, rng),
                    sample_sigma(spec.groupoid, ring, rng), seed, mix=True).presentation


class TestPipeline:
    @settings(max_examples=10)
    @given(st.integers(0, 10**6))
    def test_seed_independent(self, seed):
        spec = GROUPOIDS["leavitt_a2"]
        H, cH = full_pipeline(_scrambled("leavitt_a2", Ring.modular(3), seed))
        assert graded_iso_search(H, cH, spec.groupoid, spec.cocycle) is not None

    def test_ungraded_gets_trivial_cocycle(self):
        spec = GROUPOIDS["pair2"]
        H, cH = full_pipeline(export_presentation(spec.groupoid, None, Ring.modular(3)))
        assert cH.group == Cocycle.trivial(H).group
        assert graded_iso_search(H, cH, spec.groupoid, Cocycle.trivial(spec.groupoid)) is not None

    def test_graded_c2_recovered(self):
        spec = GROUPOIDS["c2_graded"]
        H, cH = full_pipeline(_scrambled("c2_graded", Ring.modular(4), 1))
        assert graded_iso_search(H, cH, spec.groupoid, spec.cocycle) is not None

    def test_lbh_failure_raises_with_witness(self):
        with pytest.raises(LBHError) as info:
            full_pipeline(_scrambled("c2", Ring.modular(4), 2))
        assert info.value.witness is not None and any(info.value.witness)

    def test_decomposable_ring(self):
        p = export_presentation(GROUPOIDS["c2"].groupoid, None, Ring.modular(6))
        with pytest.raises(ValueError):
            full_pipeline(p)
