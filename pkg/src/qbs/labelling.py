"""Landmark labelling scheme: path labels, meta-graph, meta APSP and the
per-meta-edge shortest-path-graph store (delta).

Labels are held in a dense ``(n, k)`` ``uint16`` table where ``INF`` marks
"no entry"; landmark rows are always empty.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .graph import INF, Graph, degree_descending

#: Internal "unreachable" for meta distances; large but overflow-safe in int32 sums.
BIG = 1 << 29


class LandmarkSet:
    """Ordered landmark vertices with O(1) membership and index lookup."""

    def __init__(self, landmarks: Sequence[int], n: int):
        lm = np.asarray(landmarks, dtype=np.int32).reshape(-1)
        if len(np.unique(lm)) != len(lm):
            raise ValueError("duplicate landmarks")
        if len(lm) > 65535:
            raise ValueError("at most 65535 landmarks are supported")
        if n > 0 and len(lm) == 0:
            raise ValueError("at least one landmark is required")
        if len(lm) and (lm.min() < 0 or lm.max() >= n):
            raise ValueError("landmark id out of range")
        self.landmarks = lm
        self.index = np.full(n, -1, dtype=np.int32)
        self.index[lm] = np.arange(len(lm), dtype=np.int32)

    @property
    def k(self) -> int:
        return len(self.landmarks)

    def __len__(self):
        return self.k

    def __iter__(self):
        return iter(self.landmarks.tolist())

    def is_landmark(self, v: int) -> bool:
        return bool(self.index[v] >= 0)

    def landmark_index(self, v: int) -> int:
        i = int(self.index[v])
        if i < 0:
            raise KeyError(f"vertex {v} is not a landmark")
        return i

    def __repr__(self):
        return f"LandmarkSet({self.landmarks.tolist()})"


def select_landmarks(g: Graph, k: int) -> LandmarkSet:
    """The ``k`` highest-degree vertices (ties by ascending id)."""
    if not 1 <= k <= g.vertex_count:
        raise ValueError(f"k must be in [1, {g.vertex_count}], got {k}")
    return LandmarkSet(degree_descending(g)[:k], g.vertex_count)


def landmark_bfs(g: Graph, r: int, landmark_set: LandmarkSet, backend: str = "auto"):
    """Label entries and meta-edges contributed by landmark ``r``.

    Returns ``(labels, meta)``: ``labels`` maps labelled vertex -> distance,
    ``meta`` is a list of ``(landmark_index, weight)`` for meta-edges at ``r``.
    """
    if not landmark_set.is_landmark(r):
        raise ValueError(f"vertex {r} is not a landmark")
    kern = _backend.get_kernels(backend)
    col, meta = kern.landmark_bfs(g.offsets, g.adjacency, landmark_set.index, int(r))
    hit = np.flatnonzero(col != INF)
    labels = dict(zip(hit.tolist(), col[hit].tolist()))
    return labels, [(int(landmark_set.index[v]), int(w)) for v, w in meta]


@dataclass(eq=False)
class LabellingScheme:
    landmark_set: LandmarkSet
    table: np.ndarray            # (n, k) uint16, INF = no entry
    meta_edges: np.ndarray       # (E_R, 3) int32 rows (i, j, weight), i < j, sorted
    delta: list                  # per meta-edge (c, 2) int32 vertex pairs, x < y
    dmeta: np.ndarray = field(default=None, repr=False)
    meta_spg: dict = field(default=None, repr=False)

    def __post_init__(self):
        self.table = np.ascontiguousarray(self.table, dtype=np.uint16)
        self.meta_edges = np.ascontiguousarray(self.meta_edges, dtype=np.int32).reshape(-1, 3)
        if self.dmeta is None or self.meta_spg is None:
            self.dmeta, self.meta_spg = meta_apsp(self.k, self.meta_edges)
        self._engines = {}

    @property
    def k(self) -> int:
        return self.landmark_set.k

    @property
    def vertex_count(self) -> int:
        return self.table.shape[0]

    @property
    def landmarks(self) -> np.ndarray:
        return self.landmark_set.landmarks

    def labels_of(self, v: int) -> list[tuple[int, int]]:
        """``L(v)`` as ``(landmark_index, distance)`` sorted by index."""
        row = self.table[v]
        idx = np.flatnonzero(row != INF)
        return list(zip(idx.tolist(), row[idx].tolist()))

    def label_distance(self, v: int, i: int) -> int | None:
        d = int(self.table[v, i])
        return None if d == INF else d

    def entry_counts(self) -> np.ndarray:
        return (self.table != INF).sum(axis=1)

    def total_entries(self) -> int:
        return int((self.table != INF).sum())

    def sigma(self, i: int, j: int) -> int | None:
        a, b = min(i, j), max(i, j)
        hit = np.flatnonzero((self.meta_edges[:, 0] == a) & (self.meta_edges[:, 1] == b))
        return int(self.meta_edges[hit[0], 2]) if len(hit) else None

    def meta_edge_id(self, i: int, j: int) -> int:
        a, b = min(i, j), max(i, j)
        hit = np.flatnonzero((self.meta_edges[:, 0] == a) & (self.meta_edges[:, 1] == b))
        if not len(hit):
            raise KeyError((i, j))
        return int(hit[0])

    def dist_meta(self, i: int, j: int) -> int:
        return int(self.dmeta[i, j])

    # size accounting, in bytes
    def label_bytes(self) -> int:
        """One 8-bit distance slot per landmark per vertex."""
        return self.vertex_count * self.k

    def meta_bytes(self) -> int:
        return 4 + 6 * len(self.meta_edges)

    def delta_bytes(self) -> int:
        return sum(4 + 8 * len(d) for d in self.delta)

    def delta_edge_count(self) -> int:
        return sum(len(d) for d in self.delta)

    def engine_arrays(self, g: Graph) -> dict:
        """Flat arrays consumed by the compiled query engine."""
        k = self.k
        dm = self.dmeta.astype(np.int64)
        dm[dm >= INF] = BIG
        spg_off = np.zeros(k * k + 1, dtype=np.int64)
        spg_edge = []
        for p in range(k * k):
            ids = self.meta_spg.get(divmod(p, k), ())
            spg_edge.extend(ids)
            spg_off[p + 1] = len(spg_edge)
        sizes = [len(d) for d in self.delta]
        delta_off = np.zeros(len(sizes) + 1, dtype=np.int64)
        np.cumsum(sizes, out=delta_off[1:])
        pairs = (np.concatenate(self.delta) if self.delta else np.empty((0, 2), np.int32)).reshape(-1, 2)
        arc = _arc_ids(g, pairs)
        return dict(
            lab=self.table,
            lm_index=self.landmark_set.index,
            landmarks=self.landmarks,
            dmeta=np.ascontiguousarray(dm, dtype=np.int32),
            spg_off=spg_off,
            spg_edge=np.asarray(spg_edge, dtype=np.int32),
            delta_off=delta_off,
            delta_x=np.ascontiguousarray(pairs[:, 0], dtype=np.int32),
            delta_y=np.ascontiguousarray(pairs[:, 1], dtype=np.int32),
            delta_arc=arc,
        )


def _arc_ids(g: Graph, pairs: np.ndarray) -> np.ndarray:
    """CSR position of arc ``x -> y`` for each row ``(x, y)``."""
    if len(pairs) == 0:
        return np.empty(0, dtype=np.int64)
    n = g.vertex_count
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees())
    keys = src * n + g.adjacency
    want = pairs[:, 0].astype(np.int64) * n + pairs[:, 1]
    pos = np.searchsorted(keys, want)
    if np.any(pos >= len(keys)) or np.any(keys[np.minimum(pos, len(keys) - 1)] != want):
        raise ValueError("delta edge not present in graph")
    return pos.astype(np.int64)


def meta_apsp(k: int, meta_edges: np.ndarray):
    """Floyd-Warshall over the weighted meta-graph.

    Returns ``(dmeta, meta_spg)``: a ``(k, k)`` int32 matrix with ``INF`` for
    disconnected pairs, and a dict ``(i, j) -> tuple of meta-edge ids`` lying
    on minimal-weight ``i``-``j`` meta-paths (empty pairs omitted).
    """
    me = np.asarray(meta_edges, dtype=np.int64).reshape(-1, 3)
    d = np.full((k, k), BIG, dtype=np.int64)
    np.fill_diagonal(d, 0)
    if len(me):
        a, b, w = me[:, 0], me[:, 1], me[:, 2]
        d[a, b] = np.minimum(d[a, b], w)
        d[b, a] = np.minimum(d[b, a], w)
    for m in range(k):
        np.minimum(d, d[:, m, None] + d[None, m, :], out=d)
    d[d >= BIG] = BIG
    spg = {}
    if len(me):
        for i in range(k):
            # via[j, e]: edge e lies on a shortest i-j meta path in either orientation
            fwd = d[i, a][None, :] + w[None, :] + d[b, :].T
            bwd = d[i, b][None, :] + w[None, :] + d[a, :].T
            target = d[i, :][:, None]
            via = ((fwd == target) | (bwd == target)) & (target < BIG)
            via[i, :] = False
            for j in np.flatnonzero(via.any(axis=1)).tolist():
                spg[(i, j)] = tuple(np.flatnonzero(via[j]).tolist())
    out = np.where(d >= BIG, INF, d).astype(np.int32)
    return out, spg


def _gather(g: Graph, frontier: np.ndarray):
    deg = g.offsets[frontier + 1] - g.offsets[frontier]
    src = np.repeat(frontier, deg)
    starts = np.repeat(g.offsets[frontier], deg)
    within = np.arange(len(src)) - np.repeat(np.cumsum(deg) - deg, deg)
    return src, g.adjacency[starts + within]


def build_delta(g: Graph, table: np.ndarray, meta_edges: np.ndarray, landmarks: np.ndarray) -> list:
    """Shortest-path-graph edges between the endpoints of each meta-edge,
    restricted to paths with no internal landmark."""
    out = []
    for i, j, w in np.asarray(meta_edges).reshape(-1, 3).tolist():
        ri, rj = int(landmarks[i]), int(landmarks[j])
        di = table[:, i].astype(np.int32)
        dj = table[:, j].astype(np.int32)
        di[ri] = 0
        dj[rj] = 0
        frontier = np.array([ri], dtype=np.int64)
        chunks = []
        for d in range(w):
            src, dst = _gather(g, frontier)
            ok = dj[dst] == w - d - 1
            if d + 1 == w:
                ok &= dst == rj
            else:
                ok &= di[dst] == d + 1
            src, dst = src[ok], dst[ok]
            chunks.append(np.column_stack([np.minimum(src, dst), np.maximum(src, dst)]))
            frontier = np.unique(dst).astype(np.int64)
        e = np.concatenate(chunks) if chunks else np.empty((0, 2), np.int64)
        e = np.unique(e, axis=0) if len(e) else e.reshape(0, 2)
        out.append(np.ascontiguousarray(e, dtype=np.int32))
    return out


def build_labelling(g: Graph, landmark_set: LandmarkSet, thread_budget: int = 1,
                    order: Iterable[int] | None = None, backend: str = "auto") -> LabellingScheme:
    """Run one landmark BFS per landmark and assemble the scheme.

    The result is independent of ``thread_budget`` and of the landmark
    processing ``order``.
    """
    if thread_budget < 1:
        raise ValueError("thread_budget must be >= 1")
    n, k = g.vertex_count, landmark_set.k
    kern = _backend.get_kernels(backend)
    lm = landmark_set.landmarks
    order = list(range(k)) if order is None else list(order)
    if sorted(order) != list(range(k)):
        raise ValueError("order must be a permutation of landmark indices")

    def one(i):
        return i, kern.landmark_bfs(g.offsets, g.adjacency, landmark_set.index, int(lm[i]))

    if thread_budget > 1 and k > 1:
        with ThreadPoolExecutor(max_workers=thread_budget) as pool:
            results = dict(pool.map(one, order))
    else:
        results = dict(map(one, order))

    table = np.full((n, k), INF, dtype=np.uint16)
    edges = {}
    for i in range(k):
        col, meta = results[i]
        table[:, i] = col
        for v, w in meta:
            j = int(landmark_set.index[v])
            key = (min(i, j), max(i, j))
            prev = edges.setdefault(key, w)
            if prev != w:
                raise AssertionError(f"inconsistent meta-edge weight for {key}")
    meta_edges = np.array([(a, b, w) for (a, b), w in sorted(edges.items())], dtype=np.int32).reshape(-1, 3)
    dmeta, spg = meta_apsp(k, meta_edges)
    delta = build_delta(g, table, meta_edges, lm)
    return LabellingScheme(landmark_set, table, meta_edges, delta, dmeta, spg)
