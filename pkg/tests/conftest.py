"""Shared fixtures and independent brute-force oracles."""
import random
from collections import deque

import numpy as np
import pytest

from qbs import Graph, load_edge_list
from qbs.generators import barabasi_albert, erdos_renyi

INF = 65535

# Landmark-labelling example: 1, 2, 3 are listed first so they get the
# lowest ids and win the degree tie-break for k=3.
FIG3_EDGES = """\
1 2
2 3
1 4
1 5
1 6
1 13
2 8
2 9
3 4
3 12
5 6
5 14
6 7
7 8
8 9
9 10
10 11
11 12
13 14
"""

# Path-labelling example; vertex order <1, 2, ..., 7>.
FIG2_EDGES = """\
3 1
1 2
3 4
4 2
2 5
5 7
6 7
"""


@pytest.fixture
def fig3():
    return load_edge_list(FIG3_EDGES)


@pytest.fixture
def fig2():
    return load_edge_list(FIG2_EDGES)


def random_graph(seed, n_lo=5, n_hi=60, deg_lo=2.0, deg_hi=16.0):
    """ER or BA graph (alternating by seed) with average degree in range."""
    rnd = random.Random(seed)
    n = rnd.randint(n_lo, n_hi)
    if seed % 2:
        p = min(1.0, rnd.uniform(deg_lo, deg_hi) / max(n - 1, 1))
        e = erdos_renyi(n, p, seed)
    else:
        m = max(1, min(n - 1, round(rnd.uniform(deg_lo, deg_hi) / 2)))
        e = barabasi_albert(n, m, seed)
    return Graph.from_edges(e, n=n)


def bfs(adj, src, removed=frozenset()):
    """Plain BFS over ``adj`` skipping ``removed`` vertices (src allowed)."""
    dist = {src: 0}
    q = deque([src])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y in dist or y in removed:
                continue
            dist[y] = dist[x] + 1
            q.append(y)
    return dist


def all_shortest_paths(adj, u, v):
    du = bfs(adj, u)
    if v not in du:
        return []
    dv = bfs(adj, v)
    out = []

    def rec(x, path):
        if x == v:
            out.append(list(path))
            return
        for y in adj[x]:
            if du.get(y) == du[x] + 1 and dv.get(y) == dv[x] - 1:
                path.append(y)
                rec(y, path)
                path.pop()

    rec(u, [u])
    return out


def spg_by_enumeration(adj, u, v):
    edges = set()
    for p in all_shortest_paths(adj, u, v):
        for a, b in zip(p, p[1:]):
            edges.add((min(a, b), max(a, b)))
    return edges


def as_edge_set(arr):
    return {(int(a), int(b)) for a, b in np.asarray(arr).reshape(-1, 2)}


def restricted_oracle(g, landmarks):
    """Expected labels, meta-edges and Delta sets from BFS on G minus other landmarks."""
    adj = g.adj_lists()
    lms = [int(x) for x in landmarks]
    lmset = set(lms)
    full = {r: bfs(adj, r) for r in lms}
    labels = {}
    for i, r in enumerate(lms):
        restricted = bfs(adj, r, lmset - {r})
        for v, d in restricted.items():
            if v not in lmset and full[r][v] == d:
                labels[(v, i)] = d
    meta = {}
    delta = {}
    for i, r in enumerate(lms):
        for j in range(i + 1, len(lms)):
            s = lms[j]
            removed = lmset - {r, s}
            dr = bfs(adj, r, removed)
            if s in dr and dr[s] == full[r][s]:
                meta[(i, j)] = dr[s]
                ds = bfs(adj, s, removed)
                es = set()
                for x, y in g.edges().tolist():
                    for a, b in ((x, y), (y, x)):
                        if a in dr and b in ds and a not in removed and b not in removed \
                                and dr[a] + 1 + ds[b] == dr[s]:
                            es.add((x, y))
                delta[(i, j)] = es
    return labels, meta, delta


def scheme_sets(s):
    labels = {}
    n, k = s.table.shape
    for v in range(n):
        for i in range(k):
            if s.table[v, i] != INF:
                labels[(v, i)] = int(s.table[v, i])
    meta = {(int(i), int(j)): int(w) for i, j, w in s.meta_edges}
    delta = {(int(i), int(j)): {tuple(e) for e in s.delta[e_id].tolist()}
             for e_id, (i, j, _) in enumerate(s.meta_edges)}
    return labels, meta, delta
