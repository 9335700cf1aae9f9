import random

import pytest

from qbs import (INF, LandmarkSet, QbsEngine, bibfs_spg, build_labelling, compute_sketch, load_edge_list,
                 oracle_spg, query_spg, select_landmarks)
from qbs.search import (bidirectional_search, compute_anchors, guided_query, pick_search, recover_search,
                        reverse_search)

from conftest import as_edge_set, bfs, random_graph, spg_by_enumeration

FIG5F = {(1, 6), (6, 7), (1, 2), (1, 4), (7, 8), (2, 9), (2, 3), (3, 4), (8, 9), (9, 10), (3, 12),
         (10, 11), (11, 12)}


@pytest.fixture
def fig3_scheme(fig3):
    return build_labelling(fig3, select_landmarks(fig3, 3))


def ext_edges(g, edges):
    return {tuple(sorted((g.external(a), g.external(b)))) for a, b in edges}


# sketch

def test_fig3_sketch(fig3, fig3_scheme):
    I, X = fig3.internal, fig3.external
    sk = compute_sketch(fig3_scheme, I(6), I(11))
    assert sk.d_top == 5
    assert (sk.d_u_star, sk.d_v_star) == (0, 2)
    got = {(*sorted((X(a), X(b))), w) for (a, b), w in sk.edges.items()}
    assert got == {(1, 6, 1), (1, 3, 2), (3, 11, 2), (2, 3, 1), (1, 2, 1), (2, 11, 3)}
    assert {X(r): w for r, w in sk.terminal_edges_v.items()} == {2: 3, 3: 2}
    assert {X(r): w for r, w in sk.terminal_edges_u.items()} == {1: 1}


def test_sketch_rejects_equal_endpoints(fig3, fig3_scheme):
    with pytest.raises(ValueError):
        compute_sketch(fig3_scheme, 0, 0)


def test_sketch_landmark_endpoint(fig3, fig3_scheme):
    I = fig3.internal
    sk = compute_sketch(fig3_scheme, I(1), I(11))
    assert sk.d_top == 4
    assert sk.d_u_star == 0


@pytest.mark.parametrize("seed", range(12))
def test_upper_bound_property(seed):
    g = random_graph(seed, 10, 80)
    s = build_labelling(g, select_landmarks(g, min(5, g.vertex_count)))
    adj = g.adj_lists()
    dl = {r: bfs(adj, r) for r in s.landmarks.tolist()}
    rnd = random.Random(seed)
    for _ in range(60):
        u, v = rnd.sample(range(g.vertex_count), 2)
        d = bfs(adj, u).get(v)
        if d is None:
            continue
        sk = compute_sketch(s, u, v)
        assert sk.d_top >= d
        through = any(dl[r].get(u, INF) + dl[r].get(v, INF) == d for r in dl)
        assert (sk.d_top == d) == through


# guided search, step by step

def test_pick_search():
    assert pick_search([5, 1], [2, 0], [0, 0]) == 0
    assert pick_search([1, 5], [0, 2], [0, 0]) == 1
    assert pick_search([3, 2], [0, 0], [1, 1]) == 1
    assert pick_search([2, 2], [0, 0], [1, 1]) == 0


def test_fig3_bidirectional_stage(fig3, fig3_scheme):
    I, X = fig3.internal, fig3.external
    sk = compute_sketch(fig3_scheme, I(6), I(11))
    st = bidirectional_search(fig3, fig3_scheme, sk, I(6), I(11))
    assert st.status == "met"
    assert st.d == [2, 3]
    assert {X(x) for x in st.visited(0)} == {5, 7, 8, 14}
    assert {X(x) for x in st.visited(1)} == {10, 12, 9, 8}
    assert {X(x) for x in st.meet} == {8}
    assert st.d_minus == 5


def test_fig3_reverse_and_recover(fig3, fig3_scheme):
    I, X = fig3.internal, fig3.external
    sk = compute_sketch(fig3_scheme, I(6), I(11))
    st = bidirectional_search(fig3, fig3_scheme, sk, I(6), I(11))
    rev = reverse_search(fig3, st.meet, st, fig3_scheme)
    assert ext_edges(fig3, rev) == {(6, 7), (7, 8), (8, 9), (9, 10), (10, 11)}
    z = compute_anchors(st, sk, fig3_scheme)
    assert {(X(w), X(r)) for w, r in z.pairs} == {(12, 3), (9, 2), (6, 1)}
    rec = recover_search(fig3, fig3_scheme, sk, z, st)
    assert ext_edges(fig3, rec | rev) == FIG5F


@pytest.mark.parametrize("backend", ["cython", "python"])
def test_fig3_query(fig3, fig3_scheme, backend):
    I = fig3.internal
    eng = QbsEngine(fig3, fig3_scheme, backend)
    res, dtop, dminus = eng.query_full(I(6), I(11))
    assert (res.distance, dtop, dminus) == (5, 5, 5)
    assert ext_edges(fig3, res.edges) == FIG5F


def test_trivial_queries(fig3, fig3_scheme):
    I = fig3.internal
    for backend in ("cython", "python"):
        eng = QbsEngine(fig3, fig3_scheme, backend)
        r = eng.query(I(6), I(6))
        assert r.distance == 0 and not r.edges
        r = eng.query(I(6), I(7))
        assert r.distance == 1 and ext_edges(fig3, r.edges) == {(6, 7)}
        with pytest.raises(IndexError):
            eng.query(0, 99)


def test_disconnected_pairs():
    g = load_edge_list("1 2\n2 3\n3 1\n7 8\n8 9\n")
    s = build_labelling(g, select_landmarks(g, 2))
    for backend in ("cython", "python"):
        eng = QbsEngine(g, s, backend)
        for a, b in ((1, 8), (2, 9), (3, 7)):
            r = eng.query(g.internal(a), g.internal(b))
            assert r.distance == INF and not r.edges
        assert bibfs_spg(g, g.internal(1), g.internal(9), backend).distance == INF


def test_guided_query_trace(fig3, fig3_scheme):
    I = fig3.internal
    res, trace = guided_query(fig3, fig3_scheme, I(5), I(10))
    assert res == oracle_spg(fig3, I(5), I(10))
    assert trace.sketch.d_top >= res.distance


@pytest.mark.parametrize("seed", range(40))
def test_matches_oracle(seed):
    g = random_graph(seed, 5, 120)
    rnd = random.Random(seed)
    n = g.vertex_count
    for k in sorted({1, 2, 5, min(20, n)}):
        s = build_labelling(g, select_landmarks(g, k))
        engines = [QbsEngine(g, s, "cython"), QbsEngine(g, s, "python")]
        for _ in range(25):
            u, v = rnd.randrange(n), rnd.randrange(n)
            want = oracle_spg(g, u, v)
            for eng in engines:
                assert eng.query(u, v) == want, (seed, k, u, v, eng.backend)
            assert bibfs_spg(g, u, v) == want
            assert bibfs_spg(g, u, v, "python") == want


@pytest.mark.parametrize("seed", range(6))
def test_oracle_matches_enumeration(seed):
    g = random_graph(seed, 5, 30)
    adj = g.adj_lists()
    for u in range(g.vertex_count):
        for v in range(u + 1, g.vertex_count):
            assert oracle_spg(g, u, v).edges == spg_by_enumeration(adj, u, v)


def test_all_landmarks_and_landmark_endpoints():
    g = random_graph(9, 20, 40)
    n = g.vertex_count
    s = build_labelling(g, LandmarkSet(list(range(n)), n))
    eng = QbsEngine(g, s)
    for u in range(0, n, 3):
        for v in range(n):
            assert eng.query(u, v) == oracle_spg(g, u, v)


def test_query_spg_caches_engine(fig3, fig3_scheme):
    a = query_spg(fig3, fig3_scheme, 0, 10)
    b = query_spg(fig3, fig3_scheme, 0, 10)
    assert a == b and len(fig3_scheme._engines) == 1


def test_scheme_graph_mismatch(fig3, fig3_scheme):
    g = random_graph(1, 30, 30)
    with pytest.raises(ValueError):
        QbsEngine(g, fig3_scheme)


def test_edges_are_canonical(fig3, fig3_scheme):
    res = QbsEngine(fig3, fig3_scheme).query(fig3.internal(6), fig3.internal(11))
    arr = res.edge_array
    assert (arr[:, 0] < arr[:, 1]).all()
    assert len(as_edge_set(arr)) == len(arr)
