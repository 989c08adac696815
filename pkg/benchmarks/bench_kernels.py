"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row checks that both backends return the same result before timing.
Rows are skipped for the compiled backend when the extension is not built.
"""
import argparse
import time

import numpy as np

from gpdrecon import kernels
from gpdrecon.coeff_ring import Ring
from gpdrecon.convolution import export_presentation
from gpdrecon.group_ring import parse_group
from gpdrecon.groupoid import pair_groupoid
from gpdrecon.instances import load_corpus


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _same(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def cases():
    corpus = load_corpus()

    def assoc(G):
        return lambda b: kernels.first_nonassociative(G.compose, backend=b)

    def units(r, g):
        ring, grp = Ring.modular(r), parse_group(g)
        total = ring.size ** grp.order
        return lambda b: kernels.group_ring_units(ring, grp.table, grp.identity, total, backend=b)

    def products(name, r, rows):
        spec = corpus[name]
        p = export_presentation(spec.groupoid, spec.cocycle, Ring.modular(r))
        rng = np.random.default_rng(0)
        A = rng.integers(0, r, size=(rows, p.dim), dtype=np.int32)
        B = rng.integers(0, r, size=(rows, p.dim), dtype=np.int32)
        return lambda b: kernels.sc_mul_pairs(A, B, p.sparse, p.ring, backend=b)

    return [
        ("associativity pair3 (9 arrows)", assoc(corpus["pair3"].groupoid)),
        ("associativity pair of 8 (64 arrows)", assoc(pair_groupoid(8))),
        ("group ring units Z/4[C3]", units(4, "cyclic3")),
        ("group ring units Z/3[V4]", units(3, "klein")),
        ("group ring units Z/5[C4]", units(5, "cyclic4")),
        ("group ring units Z/3[S3]", units(3, "sym3")),
        ("structure products pair2 x 20000", products("pair2", 4, 20000)),
        ("structure products leavitt_v x 5000", products("leavitt_v", 3, 5000)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'kernel':40s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for label, fn in cases():
        ref = fn("python")
        t_py = _time(lambda: fn("python"), args.repeat)
        if "compiled" in backends:
            got = fn("compiled")
            if not _same(ref, got):
                raise SystemExit(f"backends disagree on {label}")
            t_c = _time(lambda: fn("compiled"), args.repeat)
            print(f"{label:40s} {t_py:10.4f} {t_c:10.4f} {t_py / t_c:7.1f}x")
        else:
            print(f"{label:40s} {t_py:10.4f} {'n/a':>10s} {'':>8s}")


if __name__ == "__main__":
    main()
