"""Comparison methods and ground truth.

* ``oracle_spg``: two full BFSs; an edge ``(x, y)`` is in the answer iff
  ``D_u[x] + 1 + D_v[y] == d(u, v)`` in some orientation.
* ``bibfs_spg``: unbounded bidirectional BFS on the full graph.
* PPL / ParentPPL: pruned path labelling (a 2-hop path cover) answered by
  recursive hub expansion, optionally with stored parent sets.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .graph import INF, Graph, bfs_distances, degree_descending
from .search import SpgResult, edges_to_array


def oracle_spg(g: Graph, u: int, v: int) -> SpgResult:
    if u == v:
        return SpgResult(u, v, 0)
    du = bfs_distances(g, u).astype(np.int64)
    d = int(du[v])
    if d >= INF:
        return SpgResult(u, v, INF)
    dv = bfs_distances(g, v).astype(np.int64)
    e = g.edges()
    x, y = e[:, 0], e[:, 1]
    keep = (du[x] + 1 + dv[y] == d) | (du[y] + 1 + dv[x] == d)
    return SpgResult(u, v, d, np.ascontiguousarray(e[keep], dtype=np.int32))


def _bibfs_engine(g: Graph, backend: str):
    cache = g.__dict__.setdefault("_bibfs", {})
    eng = cache.get(backend)
    if eng is None:
        kern = _backend.get_kernels(backend)
        blocked = np.zeros(g.vertex_count, dtype=np.uint8)
        eng = cache[backend] = kern.BiBfsEngine(g.offsets, g.adjacency, g.twin, blocked)
    return eng


def bibfs_spg(g: Graph, u: int, v: int, backend: str = "auto") -> SpgResult:
    n = g.vertex_count
    if not (0 <= u < n and 0 <= v < n):
        raise IndexError(f"vertex out of range [0, {n})")
    d, e = _bibfs_engine(g, backend).query(int(u), int(v))
    return SpgResult(u, v, int(d), e)


class BuildTimeout(RuntimeError):
    """A label build exceeded its wall-clock budget (reported as DNF)."""


@dataclass
class PplLabels:
    """Per-vertex hub labels ``{hub: distance}`` (self entries included)."""
    order: list
    labels: list
    parents: list | None = None    # per vertex {hub: tuple of neighbours}

    def entries(self, v: int) -> list:
        """``(hub, distance)`` pairs of ``v`` sorted by hub id, self entry excluded."""
        return sorted((h, d) for h, d in self.labels[v].items() if h != v)

    def distance(self, a: int, b: int) -> int:
        if a == b:
            return 0
        la, lb = self.labels[a], self.labels[b]
        if len(la) > len(lb):
            la, lb = lb, la
        best = INF
        for h, d in la.items():
            e = lb.get(h)
            if e is not None and d + e < best:
                best = d + e
        return best

    def hubs(self, a: int, b: int, d: int | None = None) -> list:
        """Common hubs other than ``a``/``b`` lying on a shortest ``a``-``b`` path."""
        if d is None:
            d = self.distance(a, b)
        la, lb = self.labels[a], self.labels[b]
        return sorted(h for h, x in la.items()
                      if h != a and h != b and h in lb and x + lb[h] == d)

    def entry_count(self) -> int:
        return sum(len(l) for l in self.labels)

    def label_bytes(self) -> int:
        """32-bit hub id + 8-bit distance per entry, 32 bits per stored parent."""
        size = 5 * self.entry_count()
        if self.parents is not None:
            size += 4 * sum(len(w) for p in self.parents for w in p.values())
        return size


def pruned_bfs(g: Graph, vk: int, labels_so_far: PplLabels, adj=None, literal: bool = False) -> PplLabels:
    """One pruned BFS from ``vk``.

    A vertex whose label distance to ``vk`` is already strictly shorter is
    pruned. Vertices earlier in the order (those holding a self entry) get
    the label but are never expanded, since every path through them is
    covered by their own labels. A later vertex whose label distance merely
    ties its depth is labelled and still expanded: the tie may come from a
    hub on a different shortest path, so stopping there can leave paths
    uncovered. ``literal=True`` stops at ties instead, which is only a
    2-hop distance cover in general.
    """
    adj = adj if adj is not None else g.adj_lists()
    labels = labels_so_far.labels
    root = dict(labels[vk])
    depth = {vk: 0}
    q = deque([vk])
    while q:
        x = q.popleft()
        dx = depth[x]
        lx = labels[x]
        known = INF
        for h, d in lx.items():
            e = root.get(h)
            if e is not None and d + e < known:
                known = d + e
        if known < dx:
            continue
        earlier = x in lx
        lx[vk] = dx
        if earlier or (literal and known == dx):
            continue
        for y in adj[x]:
            if y not in depth:
                depth[y] = dx + 1
                q.append(y)
    return labels_so_far


def ppl_build(g: Graph, order=None, timeout: float | None = None, literal: bool = False) -> PplLabels:
    """Pruned BFS from every vertex in ``order`` (default: degree descending)."""
    order = degree_descending(g).tolist() if order is None else [int(x) for x in order]
    if sorted(order) != list(range(g.vertex_count)):
        raise ValueError("order must be a permutation of the vertices")
    start = time.perf_counter()
    adj = g.adj_lists()
    lab = PplLabels(order, [dict() for _ in range(g.vertex_count)])
    for vk in order:
        pruned_bfs(g, vk, lab, adj, literal)
        if timeout is not None and time.perf_counter() - start > timeout:
            raise BuildTimeout(f"PPL build exceeded {timeout}s")
    return lab


def parentppl_build(g: Graph, order=None, timeout: float | None = None) -> PplLabels:
    """PPL labels plus, per entry ``(r, d)`` of ``v``, every neighbour of
    ``v`` at distance ``d - 1`` from ``r``."""
    start = time.perf_counter()
    lab = ppl_build(g, order, timeout)
    adj = g.adj_lists()
    parents = []
    for v in range(g.vertex_count):
        pv = {}
        for r, d in lab.labels[v].items():
            if r == v:
                continue
            pv[r] = tuple(w for w in adj[v] if lab.distance(w, r) == d - 1)
        parents.append(pv)
        if timeout is not None and time.perf_counter() - start > timeout:
            raise BuildTimeout(f"ParentPPL build exceeded {timeout}s")
    lab.parents = parents
    return lab


def ppl_query(labels: PplLabels, g: Graph, u: int, v: int, memo: bool = True) -> SpgResult:
    """Recursive hub expansion; ``memo`` skips sub-pairs already expanded."""
    if u == v:
        return SpgResult(u, v, 0)
    d = labels.distance(u, v)
    if d >= INF:
        return SpgResult(u, v, INF)
    edges = set()
    done = set()
    stack = [(u, v, d)]
    while stack:
        a, b, dab = stack.pop()
        key = (a, b) if a < b else (b, a)
        if memo:
            if key in done:
                continue
            done.add(key)
        if dab == 1:
            edges.add(key)
            continue
        la, lb = labels.labels[a], labels.labels[b]
        for r in labels.hubs(a, b, dab):
            stack.append((a, r, la[r]))
            stack.append((r, b, lb[r]))
    return SpgResult(u, v, d, edges_to_array(edges))


def parentppl_query(labels: PplLabels, g: Graph, u: int, v: int) -> SpgResult:
    if labels.parents is None:
        raise ValueError("labels carry no parent sets; use parentppl_build")
    if u == v:
        return SpgResult(u, v, 0)
    d = labels.distance(u, v)
    if d >= INF:
        return SpgResult(u, v, INF)
    edges = set()
    done_pair, done_parent = set(), set()
    stack = [("pair", u, v)]
    while stack:
        kind, a, b = stack.pop()
        if kind == "pair":
            key = (a, b) if a < b else (b, a)
            if key in done_pair:
                continue
            done_pair.add(key)
            dab = labels.distance(a, b)
            if dab == 1:
                edges.add(key)
                continue
            for r in labels.hubs(a, b, dab):
                stack.append(("parent", a, r))
                stack.append(("parent", b, r))
        else:
            # all shortest a -> b paths where b is a hub of a
            if a == b or (a, b) in done_parent:
                continue
            done_parent.add((a, b))
            ws = labels.parents[a].get(b)
            if ws is None:
                stack.append(("pair", a, b))
                continue
            for w in ws:
                edges.add((a, w) if a < w else (w, a))
                stack.append(("parent", w, b))
    return SpgResult(u, v, d, edges_to_array(edges))


def enumerate_shortest_paths(g: Graph, u: int, v: int, cap: int | None = None, du=None, dv=None):
    """Yield every shortest ``u``-``v`` path as a vertex list (at most ``cap``)."""
    if u == v:
        yield [u]
        return
    du = bfs_distances(g, u) if du is None else du
    d = int(du[v])
    if d >= INF:
        return
    dv = bfs_distances(g, v) if dv is None else dv
    adj = g.adj_lists()
    count = 0
    path = [u]

    def rec(x):
        nonlocal count
        if x == v:
            count += 1
            yield list(path)
            return
        for y in adj[x]:
            if cap is not None and count >= cap:
                return
            if int(du[y]) == int(du[x]) + 1 and int(dv[y]) == int(dv[x]) - 1:
                path.append(y)
                yield from rec(y)
                path.pop()

    yield from rec(u)


@dataclass
class CoverVerdict:
    status: str                         # "pass" | "fail" | "inconclusive"
    counterexample: tuple | None = None  # (u, v, path) or (u, v, None) for a distance miss
    failures: list = field(default_factory=list)
    inconclusive_pairs: list = field(default_factory=list)

    @property
    def failing_pairs(self) -> set:
        return {(min(u, v), max(u, v)) for u, v, _ in self.failures}


def check_2hop_path_cover(g: Graph, labels: PplLabels, path_cap: int | None = 10000) -> CoverVerdict:
    """Check distance cover and path cover on every pair.

    Every enumerated shortest path of a pair at distance >= 2 must carry an
    internal common hub whose label distances sum to the pair distance.
    Pairs with more than ``path_cap`` shortest paths are reported as
    inconclusive; ``path_cap=None`` enumerates everything.
    """
    n = g.vertex_count
    dist = [bfs_distances(g, s) for s in range(n)]
    verdict = CoverVerdict("pass")
    for u in range(n):
        for v in range(u + 1, n):
            d = int(dist[u][v])
            if d >= INF:
                if labels.distance(u, v) < INF:
                    verdict.failures.append((u, v, None))
                continue
            if labels.distance(u, v) != d:
                verdict.failures.append((u, v, None))
                continue
            if d < 2:
                continue
            hubs = set(labels.hubs(u, v, d))
            seen = 0
            cap = None if path_cap is None else path_cap + 1
            for p in enumerate_shortest_paths(g, u, v, cap, dist[u], dist[v]):
                seen += 1
                if path_cap is not None and seen > path_cap:
                    verdict.inconclusive_pairs.append((u, v))
                    break
                if hubs.isdisjoint(p[1:-1]):
                    verdict.failures.append((u, v, p))
                    break
    if verdict.failures:
        verdict.status = "fail"
        verdict.counterexample = verdict.failures[0]
    elif verdict.inconclusive_pairs:
        verdict.status = "inconclusive"
    return verdict
