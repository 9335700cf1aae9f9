"""Guided search for shortest-path-graph queries.

The query runs in three stages over the landmark-free graph G-:

1. a bidirectional BFS bounded by the sketch's upper bound ``d_top`` and
   steered by the per-side search depths ``d_u*``/``d_v*``;
2. a reverse search from the meeting vertices, giving paths avoiding
   landmarks;
3. a recover search from anchor vertices, label descent toward the
   terminal landmarks, and the precomputed landmark-to-landmark edge sets,
   giving paths through landmarks.

This module holds the step-by-step pure-Python pipeline. ``QbsEngine``
dispatches to the compiled fused kernel when it is available.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _backend
from .graph import INF, Graph
from .labelling import LabellingScheme
from .sketch import Sketch, compute_sketch

_EMPTY = np.empty((0, 2), dtype=np.int32)


@dataclass(eq=False)
class SpgResult:
    """Distance plus the edge set of the shortest path graph (internal ids)."""
    source: int
    target: int
    distance: int
    edge_array: np.ndarray = field(default_factory=lambda: _EMPTY, repr=False)

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(map(tuple, self.edge_array.tolist()))

    @property
    def vertices(self) -> set:
        if self.distance == 0:
            return {self.source}
        return {x for e in self.edges for x in e}

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def __eq__(self, other):
        if not isinstance(other, SpgResult):
            return NotImplemented
        return self.distance == other.distance and self.edges == other.edges

    def __repr__(self):
        return f"SpgResult({self.source}, {self.target}, distance={self.distance}, |E|={len(self.edge_array)})"


def edges_to_array(edges) -> np.ndarray:
    if not edges:
        return _EMPTY
    return np.array(sorted(edges), dtype=np.int32).reshape(-1, 2)


@dataclass
class SearchState:
    """Per-side BFS state: ``depth[t]`` maps visited vertex -> depth and
    ``levels[t][d]`` lists the vertices first reached at depth ``d``."""
    ends: tuple
    depth: tuple = field(default_factory=lambda: ({}, {}))
    levels: tuple = field(default_factory=lambda: ([], []))
    d: list = field(default_factory=lambda: [0, 0])
    meet: set = field(default_factory=set)
    status: str = "skipped"

    @classmethod
    def start(cls, u: int, v: int, active=(True, True)) -> "SearchState":
        st = cls((u, v))
        for side, t in enumerate((u, v)):
            if active[side]:
                st.depth[side][t] = 0
                st.levels[side].append([t])
        return st

    def visited(self, side: int) -> set:
        """``P_t``: vertices reached from side ``t``, the source excluded."""
        return {x for x, dx in self.depth[side].items() if dx > 0}

    @property
    def d_minus(self) -> int:
        return self.d[0] + self.d[1] if self.status == "met" else INF

    def level(self, side: int, d: int) -> list:
        lv = self.levels[side]
        return lv[d] if d < len(lv) else []


def _free_neighbors(adj, is_lm, x):
    return [y for y in adj[x] if not is_lm[y]]


def pick_search(sizes, stars, d) -> int:
    want = [d[0] < stars[0], d[1] < stars[1]]
    if want[0] != want[1]:
        return 0 if want[0] else 1
    return 0 if sizes[0] <= sizes[1] else 1


def bidirectional_search(g: Graph, scheme: LabellingScheme, sketch: Sketch, u: int, v: int) -> SearchState:
    """Level-synchronous bidirectional BFS on G-, bounded by ``d_top``."""
    is_lm = (scheme.landmark_set.index >= 0).tolist()
    if is_lm[u] or is_lm[v]:
        raise ValueError("bidirectional stage needs two non-landmark endpoints")
    adj = g.adj_lists()
    st = SearchState.start(u, v)
    stars = (sketch.d_u_star, sketch.d_v_star)
    sizes = [0, 0]
    bound = sketch.d_top
    while st.d[0] + st.d[1] < bound:
        t = pick_search(sizes, stars, st.d)
        seen, other = st.depth[t], st.depth[1 - t]
        nd = st.d[t] + 1
        new = []
        for x in st.levels[t][-1]:
            for y in _free_neighbors(adj, is_lm, x):
                if y in seen:
                    continue
                seen[y] = nd
                new.append(y)
                if y in other:
                    st.meet.add(y)
        st.levels[t].append(new)
        st.d[t] = nd
        sizes[t] += len(new)
        if st.meet:
            st.status = "met"
            return st
        if not new:
            st.status = "exhausted"
            return st
    st.status = "bound"
    return st


def _back_walk(adj, is_lm, depth, starts, edges, done):
    stack = [s for s in starts if s not in done]
    done.update(stack)
    while stack:
        x = stack.pop()
        dx = depth[x]
        if dx == 0:
            continue
        for y in _free_neighbors(adj, is_lm, x):
            if depth.get(y, -2) == dx - 1:
                edges.add((x, y) if x < y else (y, x))
                if y not in done:
                    done.add(y)
                    stack.append(y)


def reverse_search(g: Graph, meet, state: SearchState, scheme: LabellingScheme | None = None) -> set:
    """All edges of shortest u-v paths in G- through the meet set."""
    is_lm = ((scheme.landmark_set.index >= 0).tolist() if scheme is not None
             else [False] * g.vertex_count)
    adj = g.adj_lists()
    edges: set = set()
    for side in (0, 1):
        _back_walk(adj, is_lm, state.depth[side], meet, edges, set())
    return edges


@dataclass
class AnchorSet:
    """``(w, r)`` pairs (vertex ids); ``by_side[t]`` keeps ``(w, r_index)``."""
    pairs: set = field(default_factory=set)
    by_side: tuple = field(default_factory=lambda: ([], []))


def compute_anchors(state: SearchState, sketch: Sketch, scheme: LabellingScheme) -> AnchorSet:
    z = AnchorSet()
    idx = scheme.landmark_set.index
    for side in (0, 1):
        for r, sigma in sketch.terminals(side).items():
            i = int(idx[r])
            dm = min(sigma - 1, state.d[side])
            for w in state.level(side, dm):
                lw = int(scheme.table[w, i])
                if lw != INF and lw + dm == sigma:
                    z.pairs.add((w, r))
                    z.by_side[side].append((w, i))
    return z


def recover_search(g: Graph, scheme: LabellingScheme, sketch: Sketch, anchors: AnchorSet, state: SearchState,
                   skip: set | None = None) -> set:
    """Edges of shortest u-v paths through at least one landmark."""
    adj = g.adj_lists()
    lm_index = scheme.landmark_set.index
    is_lm = (lm_index >= 0).tolist()
    tab = scheme.table
    edges: set = set()
    for side in (0, 1):
        # back-walks already done by the reverse search can be skipped
        done = set(skip or ())
        by_landmark: dict = {}
        for w, i in anchors.by_side[side]:
            by_landmark.setdefault(i, []).append(w)
        for i, ws in by_landmark.items():
            r = int(scheme.landmarks[i])
            _back_walk(adj, is_lm, state.depth[side], ws, edges, done)
            col = tab[:, i]
            seen = set(ws)
            stack = list(ws)
            while stack:
                x = stack.pop()
                dx = int(col[x])
                for y in adj[x]:
                    if dx == 1:
                        if y == r:
                            edges.add((x, y) if x < y else (y, x))
                    elif int(col[y]) == dx - 1:
                        edges.add((x, y) if x < y else (y, x))
                        if y not in seen:
                            seen.add(y)
                            stack.append(y)
    used = set()
    for i, j in sketch.pairs:
        if i != j:
            used.update(scheme.meta_spg.get((i, j), ()))
    for e in sorted(used):
        edges.update(map(tuple, scheme.delta[e].tolist()))
    return edges


@dataclass
class QueryTrace:
    sketch: Sketch
    state: SearchState
    anchors: AnchorSet | None
    reverse_edges: set
    recover_edges: set


def guided_query(g: Graph, scheme: LabellingScheme, u: int, v: int):
    """Run the full pipeline step by step; returns ``(SpgResult, QueryTrace)``."""
    n = g.vertex_count
    if not (0 <= u < n and 0 <= v < n):
        raise IndexError(f"vertex out of range [0, {n})")
    if u == v:
        return SpgResult(u, v, 0), None
    sk = compute_sketch(scheme, u, v)
    free = (not scheme.landmark_set.is_landmark(u), not scheme.landmark_set.is_landmark(v))
    if g.has_edge(u, v):
        st = SearchState.start(u, v, free)
        st.status = "met" if all(free) else "skipped"
        st.d = [1, 0] if all(free) else [0, 0]
        e = {(min(u, v), max(u, v))}
        return SpgResult(u, v, 1, edges_to_array(e)), QueryTrace(sk, st, None, e, set())
    if all(free):
        st = bidirectional_search(g, scheme, sk, u, v)
    else:
        st = SearchState.start(u, v, free)
    dminus = st.d_minus
    dist = min(dminus, sk.d_top)
    if dist >= INF:
        return SpgResult(u, v, INF), QueryTrace(sk, st, None, set(), set())
    rev: set = set()
    rec: set = set()
    anchors = None
    if dminus <= sk.d_top:
        rev = reverse_search(g, st.meet, st, scheme)
    if sk.d_top < INF and dminus >= sk.d_top:
        anchors = compute_anchors(st, sk, scheme)
        rec = recover_search(g, scheme, sk, anchors, st)
    return SpgResult(u, v, dist, edges_to_array(rev | rec)), QueryTrace(sk, st, anchors, rev, rec)


class PyQueryEngine:
    """Pure-Python engine with the same interface as ``_core.QueryEngine``."""

    def __init__(self, g: Graph, scheme: LabellingScheme):
        self.g = g
        self.scheme = scheme

    def query_full(self, u: int, v: int):
        res, trace = guided_query(self.g, self.scheme, u, v)
        if trace is None:
            return 0, 0, 0, res.edge_array
        dminus = trace.state.d_minus
        if res.distance == 1:
            dminus = 1 if all(not self.scheme.landmark_set.is_landmark(x) for x in (u, v)) else INF
        return res.distance, trace.sketch.d_top, dminus, res.edge_array

    def query(self, u: int, v: int):
        d, _, _, e = self.query_full(u, v)
        return d, e


class QbsEngine:
    """Reusable query engine bound to one graph and labelling scheme.

    Holds private scratch space, so use one engine per thread.
    """

    def __init__(self, g: Graph, scheme: LabellingScheme, backend: str = "auto"):
        if scheme.vertex_count != g.vertex_count:
            raise ValueError("scheme was built for a different graph")
        self.g = g
        self.scheme = scheme
        kern = _backend.get_kernels(backend)
        if kern is _backend.core and kern is not None:
            arrays = scheme.engine_arrays(g)
            blocked = (scheme.landmark_set.index >= 0).astype(np.uint8)
            self._impl = kern.QueryEngine(g.offsets, g.adjacency, g.twin, blocked, **arrays)
            self.backend = "cython"
        else:
            self._impl = PyQueryEngine(g, scheme)
            self.backend = "python"

    def _check(self, u, v):
        n = self.g.vertex_count
        if not (0 <= u < n and 0 <= v < n):
            raise IndexError(f"vertex out of range [0, {n})")

    def query(self, u: int, v: int) -> SpgResult:
        self._check(u, v)
        d, e = self._impl.query(int(u), int(v))
        return SpgResult(u, v, int(d), e)

    def query_full(self, u: int, v: int):
        """``(SpgResult, d_top, d_minus)``; ``d_minus`` is INF unless the
        bidirectional stage met at or below ``d_top``."""
        self._check(u, v)
        d, dtop, dminus, e = self._impl.query_full(int(u), int(v))
        return SpgResult(u, v, int(d), e), int(dtop), int(dminus)


def query_spg(g: Graph, scheme: LabellingScheme, u: int, v: int, backend: str = "auto") -> SpgResult:
    key = (backend, id(g))
    eng = scheme._engines.get(key)
    if eng is None or eng.g is not g:
        eng = scheme._engines[key] = QbsEngine(g, scheme, backend)
    return eng.query(u, v)
