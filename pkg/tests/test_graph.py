import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from conftest import small_graphs
from surveydrift.graph import Graph, GraphError, degree, graph_stats, induced_subgraph, long_range_pair_count
from surveydrift.netgen import erdos_renyi


def test_from_edges_merges_duplicates_and_drops_loops(caplog):
    g = Graph.from_edges(4, [(0, 1), (1, 0), (0, 1), (2, 2), (2, 3)])
    assert g.edge_count == 2
    assert g.self_loops_dropped == 1
    assert list(g.neighbors(0)) == [1]
    assert degree(g, 2) == 1


def test_directed_degrees_are_out_degrees():
    g = Graph.from_edges(3, [(0, 1), (0, 2), (1, 0)], directed=True)
    assert list(g.degrees) == [2, 1, 0]
    assert g.edge_count == 3
    assert g.undirected.edge_count == 2


def test_out_of_range_vertex():
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 5)])
    with pytest.raises(GraphError):
        degree(Graph.empty(2), 2)


def test_arrays_are_read_only():
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        g.indices[0] = 2


def test_induced_subgraph_reindexes_in_given_order():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    sub = induced_subgraph(g, [3, 2, 0])
    assert list(sub.vertex_ids) == [3, 2, 0]
    assert sub.graph.edge_count == 1
    assert list(sub.graph.neighbors(0)) == [1]


def test_induced_subgraph_rejects_bad_sets():
    g = Graph.empty(3)
    with pytest.raises(GraphError):
        induced_subgraph(g, [0, 0])
    with pytest.raises(GraphError):
        induced_subgraph(g, [3])


def test_long_range_examples(triangle, path3):
    assert long_range_pair_count(triangle) == 6
    assert long_range_pair_count(path3) == 6
    assert long_range_pair_count(Graph.empty(4)) == 0
    star = Graph.from_edges(5, [(0, k) for k in range(1, 5)])
    assert long_range_pair_count(star) == 20


def _dense_long_range(g: Graph) -> int:
    a = g.adjacency().toarray()
    reach = (a + a @ a) > 0
    np.fill_diagonal(reach, False)
    return int(reach.sum())


@settings(max_examples=150, deadline=None)
@given(small_graphs(max_n=12))
def test_long_range_matches_matrix_oracle(g):
    assert long_range_pair_count(g) == _dense_long_range(g)


@settings(max_examples=100, deadline=None)
@given(small_graphs(max_n=9, directed=True))
def test_long_range_follows_orientation(g):
    assert long_range_pair_count(g) == _dense_long_range(g)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=10))
def test_long_range_non_increasing_under_edge_deletion(g):
    edges = g.edges()
    if len(edges) == 0:
        return
    smaller = Graph.from_edges(g.n_vertices, edges[1:])
    assert long_range_pair_count(smaller) <= long_range_pair_count(g)


def test_graph_stats_against_networkx():
    g = erdos_renyi(120, 0.05, seed=4)
    ref = nx.Graph()
    ref.add_nodes_from(range(g.n_vertices))
    ref.add_edges_from(g.edges().tolist())
    s = graph_stats(g, chunk=17)
    assert s.avg_degree == pytest.approx(2 * ref.number_of_edges() / 120)
    assert s.clustering_coefficient == pytest.approx(nx.average_clustering(ref), abs=1e-12)
    giant = ref.subgraph(max(nx.connected_components(ref), key=len))
    assert s.giant_component_size == giant.number_of_nodes()
    assert s.avg_path_length == pytest.approx(nx.average_shortest_path_length(giant), abs=1e-12)


def test_graph_stats_triangle(triangle):
    s = graph_stats(triangle)
    assert s.clustering_coefficient == 1.0
    assert s.avg_path_length == 1.0
    assert graph_stats(Graph.empty(0)).giant_component_size == 0
