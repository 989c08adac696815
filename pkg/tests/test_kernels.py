"""The compiled and pure-Python kernels must agree exactly."""
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gpdrecon import kernels
from gpdrecon.coeff_ring import Ring
from gpdrecon.convolution import export_presentation
from gpdrecon.group_ring import FiniteGroup
from gpdrecon.groupoid import pair_groupoid

BACKENDS = kernels.available_backends()
needs_compiled = pytest.mark.skipif("compiled" not in BACKENDS,
                                    reason="compiled extension not built")


@given(st.integers(1, 6), st.data())
def test_first_nonassociative_agrees(n, data):
    table = np.array(data.draw(st.lists(st.lists(st.integers(0, n - 1), min_size=n, max_size=n),
                                        min_size=n, max_size=n)), dtype=np.int32)
    results = {b: kernels.first_nonassociative(table, backend=b) for b in BACKENDS}
    assert len({None if r is None else tuple(r) for r in results.values()}) == 1
    r = results["python"]
    if r is not None:
        a, b, c = r
        assert table[table[a, b], c] != table[a, table[b, c]]


def test_first_nonassociative_on_group():
    t = np.array(FiniteGroup.symmetric(3).table)
    for b in BACKENDS:
        assert kernels.first_nonassociative(t, backend=b) is None


@pytest.mark.parametrize("n, group", [(4, FiniteGroup.cyclic(2)), (3, FiniteGroup.cyclic(3)),
                                      (2, FiniteGroup.symmetric(3))])
def test_group_ring_units_agree(n, group):
    r = Ring.modular(n)
    total = n ** group.order
    outs = [kernels.group_ring_units(r, group.table, group.identity, total, backend=b)
            for b in BACKENDS]
    for o in outs[1:]:
        assert np.array_equal(o, outs[0])


@given(st.sampled_from([2, 3, 4]), st.data())
def test_sc_mul_pairs_agree(n, data):
    ring = Ring.modular(n)
    p = export_presentation(pair_groupoid(2), None, ring)
    sc = kernels.SparseConstants(p.dim, p.triples)
    rows = data.draw(st.integers(1, 8))
    vec = st.lists(st.integers(0, n - 1), min_size=p.dim * rows, max_size=p.dim * rows)
    A = np.array(data.draw(vec), dtype=np.int32).reshape(rows, p.dim)
    B = np.array(data.draw(vec), dtype=np.int32).reshape(rows, p.dim)
    outs = [kernels.sc_mul_pairs(A, B, sc, ring, backend=b) for b in BACKENDS]
    for o in outs[1:]:
        assert np.array_equal(o, outs[0])
    for i in range(rows):
        assert tuple(outs[0][i]) == p.mul(tuple(A[i]), tuple(B[i]))


@needs_compiled
def test_pure_env_selects_fallback():
    code = "import gpdrecon.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, GPDRECON_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_set_backend_round_trip():
    before = kernels.BACKEND
    try:
        kernels.set_backend("python")
        assert kernels.BACKEND == "python"
        with pytest.raises(ValueError):
            kernels.set_backend("gpu")
    finally:
        kernels.set_backend(before)
