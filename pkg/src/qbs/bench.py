"""Query sampling, timing and pair-coverage statistics."""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import (BuildTimeout, bibfs_spg, oracle_spg, parentppl_build, parentppl_query,
                        ppl_build, ppl_query)
from .graph import INF, Graph
from .labelling import build_labelling, select_landmarks
from .search import QbsEngine

METHODS = ("qbs", "bibfs", "ppl", "parentppl", "oracle")


@dataclass
class QuerySet:
    seed: int
    pairs: list

    def __len__(self):
        return len(self.pairs)


def sample_pairs(g: Graph, n: int, seed: int = 0) -> QuerySet:
    """``n`` distinct unordered pairs ``u != v``, uniform over all such pairs."""
    nv = g.vertex_count
    total = nv * (nv - 1) // 2
    n = min(n, total)
    rng = np.random.default_rng(seed)
    seen: set = set()
    pairs = []
    while len(pairs) < n:
        u, v = rng.integers(0, nv, size=2).tolist()
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        pairs.append((u, v))
    return QuerySet(seed, pairs)


@dataclass
class MethodReport:
    method: str
    build_s: float = 0.0
    label_bytes: int = 0
    query_count: int = 0
    mean_us: float = float("nan")
    p50_us: float = float("nan")
    p99_us: float = float("nan")
    verified: str = "skipped"
    dnf: bool = False

    def row(self) -> dict:
        return {
            "method": self.method,
            "build_s": round(self.build_s, 6),
            "label_bytes": self.label_bytes,
            "query_count": self.query_count,
            "mean_us": round(self.mean_us, 3) if self.mean_us == self.mean_us else None,
            "p50_us": round(self.p50_us, 3) if self.p50_us == self.p50_us else None,
            "p99_us": round(self.p99_us, 3) if self.p99_us == self.p99_us else None,
            "verified": "DNF" if self.dnf else self.verified,
        }


@dataclass
class BenchReport:
    pairs: QuerySet
    methods: list = field(default_factory=list)

    def by_method(self, name: str) -> MethodReport:
        return next(m for m in self.methods if m.method == name)


def make_method(name: str, g: Graph, scheme=None, k: int = 20, threads: int = 1, timeout=None):
    """Return ``(query_fn, build_seconds, label_bytes)`` for a method."""
    t0 = time.perf_counter()
    if name == "qbs":
        if scheme is None:
            scheme = build_labelling(g, select_landmarks(g, min(k, g.vertex_count)), threads)
        eng = QbsEngine(g, scheme)
        return eng.query, time.perf_counter() - t0, scheme.label_bytes() + scheme.meta_bytes()
    if name == "bibfs":
        return (lambda u, v: bibfs_spg(g, u, v)), 0.0, 0
    if name == "ppl":
        lab = ppl_build(g, timeout=timeout)
        return (lambda u, v: ppl_query(lab, g, u, v)), time.perf_counter() - t0, lab.label_bytes()
    if name == "parentppl":
        lab = parentppl_build(g, timeout=timeout)
        return (lambda u, v: parentppl_query(lab, g, u, v)), time.perf_counter() - t0, lab.label_bytes()
    if name == "oracle":
        return (lambda u, v: oracle_spg(g, u, v)), 0.0, 0
    raise ValueError(f"unknown method {name!r}")


def _percentile(xs, q):
    return float(np.percentile(np.asarray(xs), q)) if xs else float("nan")


def run_bench(g: Graph, qs: QuerySet, methods, scheme=None, k: int = 20, verify: bool = False,
              timeout: float | None = None, threads: int = 1) -> BenchReport:
    report = BenchReport(qs)
    truth = {}
    if verify:
        truth = {p: oracle_spg(g, *p) for p in qs.pairs}
    for name in methods:
        rep = MethodReport(name)
        try:
            fn, rep.build_s, rep.label_bytes = make_method(name, g, scheme, k, threads, timeout)
        except BuildTimeout:
            rep.dnf = True
            report.methods.append(rep)
            continue
        times = []
        ok = True
        clock = time.perf_counter_ns
        for u, v in qs.pairs:
            t0 = clock()
            res = fn(u, v)
            times.append((clock() - t0) / 1000.0)
            if verify and res != truth[(u, v)]:
                ok = False
        rep.query_count = len(times)
        if times:
            rep.mean_us = statistics.fmean(times)
            rep.p50_us = _percentile(times, 50)
            rep.p99_us = _percentile(times, 99)
        if verify:
            rep.verified = "pass" if ok else "fail"
        report.methods.append(rep)
    return report


# pair coverage

ALL, SOME, NONE = "all", "some", "none"


def classify(dist: int, d_top: int, d_minus: int) -> str:
    """Whether all, some, or none of the shortest paths touch a landmark.

    ``d_minus`` may be INF when the landmark-free search gave up above
    ``d_top``; unreachable pairs count as ``none``.
    """
    if dist >= INF:
        return NONE
    if d_minus > dist:
        return ALL
    if d_top == dist:
        return SOME
    return NONE


@dataclass
class CoverageReport:
    k: int
    n: int
    n_all: int
    n_some: int
    n_none: int

    @property
    def ratio_all(self) -> float:
        return self.n_all / self.n if self.n else 0.0

    @property
    def ratio_some(self) -> float:
        return self.n_some / self.n if self.n else 0.0

    @property
    def ratio_none(self) -> float:
        return self.n_none / self.n if self.n else 0.0

    def row(self) -> dict:
        return {"k": self.k, "n": self.n, "n_all": self.n_all, "n_some": self.n_some,
                "n_none": self.n_none, "ratio_all": round(self.ratio_all, 6),
                "ratio_some": round(self.ratio_some, 6), "ratio_none": round(self.ratio_none, 6)}


def coverage(g: Graph, scheme, pairs) -> CoverageReport:
    eng = QbsEngine(g, scheme)
    counts = {ALL: 0, SOME: 0, NONE: 0}
    for u, v in pairs:
        res, d_top, d_minus = eng.query_full(u, v)
        counts[classify(res.distance, d_top, d_minus)] += 1
    return CoverageReport(scheme.k, len(pairs), counts[ALL], counts[SOME], counts[NONE])
