import io

import numpy as np
import pytest

from qbs import Graph, bfs_distances, degree_descending, export_edge_list, load_edge_list
from qbs.graph import EdgeListError

from conftest import bfs, random_graph


def test_load_remaps_in_first_appearance_order():
    g = load_edge_list("# header\n10 20\n20 30\n% other comment\n\n5 10\n")
    assert g.vertex_count == 4
    assert [g.external(i) for i in range(4)] == [10, 20, 30, 5]
    assert g.internal(5) == 3
    assert g.edge_count == 3
    assert g.report.comments == 2


def test_self_loops_and_duplicates_dropped():
    g = load_edge_list("1 2\n2 1\n1 2\n3 3\n2 3\n")
    assert g.edge_count == 2
    assert g.report.self_loops == 1
    assert g.report.duplicates == 2
    assert list(g.neighbors(g.internal(2))) == sorted([g.internal(1), g.internal(3)])


def test_csr_is_sorted_and_symmetric():
    g = random_graph(3, 30, 60)
    for v in range(g.vertex_count):
        nb = g.neighbors(v)
        assert list(nb) == sorted(set(nb.tolist()))
        for w in nb:
            assert g.has_edge(int(w), v)
    assert g.offsets[-1] == 2 * g.edge_count


def test_twin_points_at_reverse_arc():
    g = random_graph(5, 20, 40)
    src = np.repeat(np.arange(g.vertex_count), np.diff(g.offsets))
    t = g.twin
    assert np.array_equal(g.adjacency[t], src)
    assert np.array_equal(src[t], g.adjacency)


@pytest.mark.parametrize("text,lineno", [("1 2\nfoo 3\n", 2), ("1\n", 1), ("1 -2\n", 1), ("1 2\n3 x 4\n", 2)])
def test_parse_errors_carry_line_number(text, lineno):
    with pytest.raises(EdgeListError) as exc:
        load_edge_list(text)
    assert exc.value.lineno == lineno


def test_extra_columns_ignored():
    g = load_edge_list("1 2 0.5\n2 3 7\n")
    assert g.edge_count == 2


def test_unknown_external_id():
    g = load_edge_list("1 2\n")
    with pytest.raises(KeyError):
        g.internal(7)


def test_neighbors_out_of_range():
    g = load_edge_list("1 2\n")
    with pytest.raises(IndexError):
        g.neighbors(5)


def test_export_is_canonical_and_round_trips():
    text = "9 4\n4 1\n1 9\n7 4\n"
    g = load_edge_list(text)
    out = export_edge_list(g)
    assert out == "1 4\n1 9\n4 7\n4 9\n"
    buf = io.StringIO()
    export_edge_list(load_edge_list(out), buf)
    assert buf.getvalue() == out


def test_empty_input():
    g = load_edge_list("# nothing\n")
    assert g.vertex_count == 0 and g.edge_count == 0
    assert export_edge_list(g) == ""


def test_bfs_matches_plain_bfs():
    for seed in range(6):
        g = random_graph(seed, 5, 80)
        adj = g.adj_lists()
        for s in range(0, g.vertex_count, 7):
            d = bfs_distances(g, s)
            ref = bfs(adj, s)
            for v in range(g.vertex_count):
                assert int(d[v]) == ref.get(v, 65535)


def test_bfs_with_exclusions():
    g = load_edge_list("0 1\n1 2\n2 3\n0 4\n4 5\n5 3\n")
    d = bfs_distances(g, g.internal(0), excluded=[g.internal(1)])
    assert int(d[g.internal(3)]) == 3
    assert int(d[g.internal(1)]) == 65535
    with pytest.raises(ValueError):
        bfs_distances(g, g.internal(1), excluded=[g.internal(1)])


def test_degree_descending_breaks_ties_by_id():
    g = random_graph(8, 40, 80)
    deg = g.degrees()
    ref = sorted(range(g.vertex_count), key=lambda v: (-int(deg[v]), v))
    assert degree_descending(g).tolist() == ref


def test_from_edges_with_isolated_vertices():
    g = Graph.from_edges(np.array([[0, 1]]), n=4)
    assert g.vertex_count == 4 and g.degree(3) == 0
