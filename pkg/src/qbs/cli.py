"""Command-line interface: build, query, bench, stats, gen."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import index_io
from .baselines import bibfs_spg, oracle_spg, parentppl_build, parentppl_query, ppl_build, ppl_query
from .bench import METHODS, coverage, run_bench, sample_pairs
from .graph import INF, EdgeListError, load_edge_file, export_edge_list
from .generators import generate
from .labelling import LandmarkSet, build_labelling, select_landmarks
from .search import QbsEngine
from .sketch import compute_sketch


class CliError(Exception):
    pass


def _positive(text):
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return val


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _load_graph(path):
    try:
        return load_edge_file(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}")
    except EdgeListError as exc:
        raise CliError(str(exc))


def _load_index(path, g):
    try:
        scheme = index_io.load(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}")
    except index_io.IndexDecodeError as exc:
        raise CliError(f"bad index {path}: {exc}")
    if scheme.vertex_count != g.vertex_count:
        raise CliError("index and graph disagree on the vertex count")
    return scheme


def _build_scheme(g, k, threads=1, landmarks=None):
    if landmarks is not None:
        try:
            lset = LandmarkSet([g.internal(x) for x in landmarks], g.vertex_count)
        except KeyError as exc:
            raise CliError(f"unknown landmark id {exc.args[0]}")
    else:
        if not 1 <= k <= g.vertex_count:
            raise CliError(f"-k must be in [1, {g.vertex_count}]")
        lset = select_landmarks(g, k)
    return build_labelling(g, lset, threads)


def cmd_build(args, out):
    g = _load_graph(args.graph)
    t0 = time.perf_counter()
    try:
        scheme = _build_scheme(g, args.k, args.threads, args.landmarks)
    except OverflowError as exc:
        raise CliError(f"distance overflow: {exc}")
    build_s = time.perf_counter() - t0
    nbytes = index_io.save(scheme, args.output)
    print(f"build_seconds\t{build_s:.6f}", file=out)
    print(f"landmarks\t{scheme.k}", file=out)
    print(f"label_entries\t{scheme.total_entries()}", file=out)
    print(f"size_labels\t{scheme.label_bytes()}", file=out)
    print(f"size_meta\t{scheme.meta_bytes()}", file=out)
    print(f"size_delta\t{scheme.delta_bytes()}", file=out)
    print(f"index_bytes\t{nbytes}", file=out)
    return 0


def _sketch_dump(g, scheme, u, v):
    if u == v:
        return None
    sk = compute_sketch(scheme, u, v)
    ext = g.external
    edges = sorted((min(ext(a), ext(b)), max(ext(a), ext(b)), w) for (a, b), w in sk.edges.items())
    return {
        "vertices": sorted(ext(x) for x in sk.vertices),
        "edges": [list(e) for e in edges],
        "d_top": None if sk.d_top >= INF else sk.d_top,
        "d_star_s": sk.d_u_star,
        "d_star_t": sk.d_v_star,
    }


def run_query(g, method, u, v, scheme=None):
    if method == "qbs":
        return QbsEngine(g, scheme).query(u, v)
    if method == "bibfs":
        return bibfs_spg(g, u, v)
    if method == "ppl":
        return ppl_query(ppl_build(g), g, u, v)
    if method == "parentppl":
        return parentppl_query(parentppl_build(g), g, u, v)
    return oracle_spg(g, u, v)


def cmd_query(args, out):
    g = _load_graph(args.graph)
    try:
        u, v = g.internal(args.source), g.internal(args.target)
    except KeyError as exc:
        raise CliError(f"unknown vertex id {exc.args[0]}")
    scheme = None
    if args.method == "qbs" or args.explain:
        if args.index is None:
            raise CliError("-i/--index is required for qbs queries and --explain")
        scheme = _load_index(args.index, g)
    res = run_query(g, args.method, u, v, scheme)
    ext = g.external
    edges = sorted((min(ext(a), ext(b)), max(ext(a), ext(b))) for a, b in res.edges)
    dist = None if res.distance >= INF else res.distance
    sketch = _sketch_dump(g, scheme, u, v) if args.explain else None
    if args.format == "json":
        doc = {"source": args.source, "target": args.target, "method": args.method,
               "distance": dist, "edges": [list(e) for e in edges]}
        if args.explain:
            doc["sketch"] = sketch
        print(json.dumps(doc, sort_keys=True), file=out)
        return 0
    print(f"distance {'inf' if dist is None else dist}", file=out)
    for a, b in edges:
        print(f"{a} {b}", file=out)
    if args.explain:
        print("sketch " + json.dumps(sketch, sort_keys=True), file=out)
    return 0


BENCH_COLUMNS = ("method", "build_s", "label_bytes", "query_count", "mean_us", "p50_us", "p99_us", "verified")


def cmd_bench(args, out):
    g = _load_graph(args.graph)
    scheme = _load_index(args.index, g) if args.index else None
    methods = args.methods or ["qbs", "bibfs"]
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise CliError(f"unknown method(s): {', '.join(bad)}")
    qs = sample_pairs(g, args.n, args.seed)
    rep = run_bench(g, qs, methods, scheme, k=args.k, verify=args.verify, timeout=args.timeout)
    rows = [m.row() for m in rep.methods]
    if args.format == "json":
        print(json.dumps({"pairs": len(qs), "seed": args.seed, "methods": rows}, sort_keys=True), file=out)
        return 0
    print("\t".join(BENCH_COLUMNS), file=out)
    for r in rows:
        print("\t".join("" if r[c] is None else str(r[c]) for c in BENCH_COLUMNS), file=out)
    return 0


STATS_COLUMNS = ("k", "n", "n_all", "n_some", "n_none", "ratio_all", "ratio_some", "ratio_none")


def cmd_stats(args, out):
    g = _load_graph(args.graph)
    pairs = sample_pairs(g, args.n, args.seed).pairs
    reports = []
    if args.landmark_sweep:
        for k in args.landmark_sweep:
            reports.append(coverage(g, _build_scheme(g, k), pairs))
    else:
        scheme = _load_index(args.index, g) if args.index else _build_scheme(g, args.k)
        reports.append(coverage(g, scheme, pairs))
    rows = [r.row() for r in reports]
    if args.format == "json":
        print(json.dumps(rows, sort_keys=True), file=out)
        return 0
    print("\t".join(STATS_COLUMNS), file=out)
    for r in rows:
        print("\t".join(str(r[c]) for c in STATS_COLUMNS), file=out)
    return 0


def cmd_gen(args, out):
    try:
        g = generate(args.model, args.n, args.m_or_p, args.seed)
    except ValueError as exc:
        raise CliError(str(exc))
    if args.output in (None, "-"):
        export_edge_list(g, out)
    else:
        with open(args.output, "w") as fh:
            export_edge_list(g, fh)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbs", description="Shortest-path-graph queries with landmark labelling.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build and save a labelling index")
    b.add_argument("-g", "--graph", required=True)
    b.add_argument("-k", type=_positive, default=20)
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
    b.add_argument("--landmarks", type=_int_list, help="comma-separated external ids; overrides -k")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer one shortest-path-graph query")
    q.add_argument("-i", "--index")
    q.add_argument("-g", "--graph", required=True)
    q.add_argument("-s", "--source", type=int, required=True)
    q.add_argument("-t", "--target", type=int, required=True)
    q.add_argument("--method", choices=METHODS, default="qbs")
    q.add_argument("--format", choices=("text", "json"), default="text")
    q.add_argument("--explain", action="store_true", help="also dump the sketch")
    q.set_defaults(func=cmd_query)

    be = sub.add_parser("bench", help="time methods over sampled pairs")
    be.add_argument("-i", "--index")
    be.add_argument("-g", "--graph", required=True)
    be.add_argument("-n", type=_positive, default=10000)
    be.add_argument("-k", type=_positive, default=20, help="landmarks when no index is given")
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--methods", type=lambda s: [x for x in s.split(",") if x])
    be.add_argument("--verify", action="store_true")
    be.add_argument("--timeout", type=float, help="build budget in seconds")
    be.add_argument("--format", choices=("tsv", "json"), default="tsv")
    be.set_defaults(func=cmd_bench)

    st = sub.add_parser("stats", help="pair coverage ratios")
    st.add_argument("-i", "--index")
    st.add_argument("-g", "--graph", required=True)
    st.add_argument("-n", type=_positive, default=10000)
    st.add_argument("-k", type=_positive, default=20)
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--landmark-sweep", type=_int_list)
    st.add_argument("--format", choices=("tsv", "json"), default="tsv")
    st.set_defaults(func=cmd_stats)

    gn = sub.add_parser("gen", help="generate a synthetic graph")
    gn.add_argument("--model", choices=("er", "ba", "grid"), required=True)
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--m-or-p", type=float, required=True, help="p for er, m for ba, columns for grid")
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("-o", "--output")
    gn.set_defaults(func=cmd_gen)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"qbs: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
