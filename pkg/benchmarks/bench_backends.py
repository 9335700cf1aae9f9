"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_backends.py [--n 20000] [--m 5] [--pairs 500] [--k 20]

Times the landmark build and the QbS / Bi-BFS queries on a BA graph under
both backends, and checks that they return identical answers.
"""
import argparse
import time

from qbs import QbsEngine, bibfs_spg, build_labelling, select_landmarks
from qbs._backend import core
from qbs.bench import sample_pairs
from qbs.generators import generate
from qbs.index_io import encode


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def per_query_us(fn, pairs):
    t0 = time.perf_counter()
    out = [fn(u, v) for u, v in pairs]
    return out, (time.perf_counter() - t0) / len(pairs) * 1e6


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--pairs", type=int, default=500)
    ap.add_argument("--k", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    if core is None:
        raise SystemExit("compiled extension not available; nothing to compare")

    g = generate("ba", args.n, args.m, args.seed)
    lset = select_landmarks(g, args.k)
    pairs = sample_pairs(g, args.pairs, args.seed).pairs
    print(f"BA graph |V|={g.vertex_count} |E|={g.edge_count} k={args.k} pairs={len(pairs)}")
    print("stage\tcython\tpython\tspeedup")

    sc, tc = timed(build_labelling, g, lset, 1, None, "cython")
    sp, tp = timed(build_labelling, g, lset, 1, None, "python")
    assert encode(sc) == encode(sp)
    print(f"build_s\t{tc:.3f}\t{tp:.3f}\t{tp / tc:.1f}x")

    qc, tc = per_query_us(QbsEngine(g, sc, "cython").query, pairs)
    qp, tp = per_query_us(QbsEngine(g, sc, "python").query, pairs)
    assert qc == qp
    print(f"qbs_us\t{tc:.1f}\t{tp:.1f}\t{tp / tc:.1f}x")

    bc, tc = per_query_us(lambda u, v: bibfs_spg(g, u, v, "cython"), pairs)
    bp, tp = per_query_us(lambda u, v: bibfs_spg(g, u, v, "python"), pairs)
    assert bc == bp == qc
    print(f"bibfs_us\t{tc:.1f}\t{tp:.1f}\t{tp / tc:.1f}x")


if __name__ == "__main__":
    main()
