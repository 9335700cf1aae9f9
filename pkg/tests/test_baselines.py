import random
from collections import deque

import numpy as np
import pytest

from qbs import (INF, Graph, check_2hop_path_cover, load_edge_list, oracle_spg, parentppl_build, parentppl_query,
                 ppl_build, ppl_query)
from qbs.baselines import BuildTimeout, PplLabels, enumerate_shortest_paths

from conftest import all_shortest_paths, bfs, random_graph


def pll_build(g, order):
    """Classic pruned landmark labelling: prunes ties too, so only a distance cover."""
    adj = g.adj_lists()
    lab = PplLabels(list(order), [dict() for _ in range(g.vertex_count)])
    for vk in order:
        depth = {vk: 0}
        q = deque([vk])
        while q:
            x = q.popleft()
            root, lx = lab.labels[vk], lab.labels[x]
            known = min((d + root[h] for h, d in lx.items() if h in root), default=INF)
            if known <= depth[x]:
                continue
            lab.labels[x][vk] = depth[x]
            for y in adj[x]:
                if y not in depth:
                    depth[y] = depth[x] + 1
                    q.append(y)
    return lab


def fig2_order(g):
    return [g.internal(x) for x in range(1, 8)]


def test_fig2_hubs(fig2):
    I, X = fig2.internal, fig2.external
    lab = ppl_build(fig2, fig2_order(fig2))
    assert [X(h) for h in lab.hubs(I(3), I(7))] == [1, 2]
    assert lab.labels[I(7)][I(1)] == 3
    assert lab.labels[I(1)][I(2)] == 1


def test_fig2_path_cover_vs_distance_cover(fig2):
    I = fig2.internal
    pll = pll_build(fig2, fig2_order(fig2))
    # still an exact distance oracle
    for u in range(7):
        d = bfs(fig2.adj_lists(), u)
        for v in range(7):
            assert pll.distance(u, v) == d[v]
    verdict = check_2hop_path_cover(fig2, pll)
    assert verdict.status == "fail"
    assert (min(I(3), I(7)), max(I(3), I(7))) in verdict.failing_pairs
    assert check_2hop_path_cover(fig2, ppl_build(fig2, fig2_order(fig2))).status == "pass"


def test_fig2_query(fig2):
    I = fig2.internal
    lab = parentppl_build(fig2, fig2_order(fig2))
    want = oracle_spg(fig2, I(3), I(7))
    assert ppl_query(lab, fig2, I(3), I(7)) == want
    assert ppl_query(lab, fig2, I(3), I(7), memo=False) == want
    assert parentppl_query(lab, fig2, I(3), I(7)) == want
    got = {tuple(sorted((fig2.external(a), fig2.external(b)))) for a, b in want.edges}
    assert got == {(1, 3), (1, 2), (3, 4), (2, 4), (2, 5), (5, 7)}


def test_tie_pruning_counterexample():
    # A 4-cycle 1-2-3-4 with pendants 0-4 and 2-5, order <0..5>. Stopping the
    # BFS from 2 at vertex 4 (tie via hub 1) would leave 0-4-3-2-5 uncovered.
    g = Graph.from_edges(np.array([(0, 4), (1, 2), (1, 4), (2, 3), (2, 5), (3, 4)]), n=6)
    literal = ppl_build(g, list(range(6)), literal=True)
    verdict = check_2hop_path_cover(g, literal)
    assert (0, 5) in verdict.failing_pairs
    fixed = ppl_build(g, list(range(6)))
    assert check_2hop_path_cover(g, fixed).status == "pass"
    assert ppl_query(fixed, g, 0, 5) == oracle_spg(g, 0, 5)


@pytest.mark.parametrize("seed", range(30))
def test_ppl_is_path_cover(seed):
    g = random_graph(seed, 5, 60)
    verdict = check_2hop_path_cover(g, ppl_build(g), path_cap=None)
    assert verdict.status == "pass", verdict.counterexample


def test_first_root_labels_everything():
    g = random_graph(3, 20, 40)
    lab = ppl_build(g)
    r = lab.order[0]
    d = bfs(g.adj_lists(), r)
    for v, dv in d.items():
        assert lab.labels[v][r] == dv


def test_path_order_example():
    g = load_edge_list("0 1\n1 2\n")
    I = g.internal
    lab = ppl_build(g, [I(1), I(0), I(2)])
    assert lab.entries(I(0)) == [(I(1), 1)]
    for u in range(3):
        for v in range(3):
            assert lab.distance(u, v) == abs(g.external(u) - g.external(v))


@pytest.mark.parametrize("seed", range(20))
def test_ppl_queries_match_oracle(seed):
    g = random_graph(seed, 5, 100)
    lab = parentppl_build(g)
    rnd = random.Random(seed)
    for _ in range(60):
        u, v = rnd.randrange(g.vertex_count), rnd.randrange(g.vertex_count)
        want = oracle_spg(g, u, v)
        assert ppl_query(lab, g, u, v) == want
        assert parentppl_query(lab, g, u, v) == want


def test_ppl_distances_exact():
    for seed in range(10):
        g = random_graph(seed, 5, 100)
        lab = ppl_build(g)
        adj = g.adj_lists()
        for u in range(0, g.vertex_count, 5):
            d = bfs(adj, u)
            for v in range(g.vertex_count):
                assert lab.distance(u, v) == d.get(v, INF)


def test_parentppl_needs_parents(fig2):
    with pytest.raises(ValueError):
        parentppl_query(ppl_build(fig2), fig2, 0, 1)


def test_build_timeout():
    g = random_graph(2, 200, 200)
    with pytest.raises(BuildTimeout):
        ppl_build(g, timeout=0.0)


def test_order_must_be_permutation(fig2):
    with pytest.raises(ValueError):
        ppl_build(fig2, [0, 1, 2])


def test_enumerate_shortest_paths_cap():
    g = Graph.from_edges(np.array([(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)]), n=7)
    paths = list(enumerate_shortest_paths(g, 0, 6))
    assert sorted(map(tuple, paths)) == sorted(map(tuple, all_shortest_paths(g.adj_lists(), 0, 6)))
    assert len(paths) == 4
    assert len(list(enumerate_shortest_paths(g, 0, 6, cap=2))) == 2


def test_check_reports_inconclusive():
    g = Graph.from_edges(np.array([(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)]), n=7)
    v = check_2hop_path_cover(g, ppl_build(g), path_cap=1)
    assert v.status == "inconclusive" and v.inconclusive_pairs


def test_label_bytes():
    g = random_graph(4, 20, 40)
    lab = parentppl_build(g)
    n_par = sum(len(w) for p in lab.parents for w in p.values())
    assert lab.label_bytes() == 5 * lab.entry_count() + 4 * n_par
