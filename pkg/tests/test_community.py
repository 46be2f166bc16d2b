import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from scipy.sparse import csgraph

from conftest import small_graphs
from surveydrift.community import detect_communities, modularity
from surveydrift.graph import Graph, induced_subgraph
from surveydrift.netgen import disjoint_cliques, erdos_renyi


def _best_two_partition(g: Graph):
    n = g.n_vertices
    best, arg = -np.inf, None
    for mask in range(1, 2 ** (n - 1)):
        labels = np.array([(mask >> v) & 1 for v in range(n)])
        q = modularity(g, labels)
        if q > best:
            best, arg = q, labels
    return best, arg


def test_two_triangles():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    labels = detect_communities(g, seed=0)
    assert list(labels) == [0, 0, 0, 1, 1, 1]
    best, arg = _best_two_partition(g)
    assert modularity(g, labels) == best
    assert len(set(zip(labels, arg))) == 2


def test_complete_graph_is_one_community():
    g = Graph.from_edges(6, list(itertools.combinations(range(6), 2)))
    assert set(detect_communities(g, seed=3).tolist()) == {0}
    best, _ = _best_two_partition(g)
    assert best < 0


def test_empty_graph_singletons():
    assert list(detect_communities(Graph.empty(5), seed=0)) == [0, 1, 2, 3, 4]


def test_disjoint_cliques_recovered():
    g = disjoint_cliques(20, 5)
    labels = detect_communities(g, seed=1)
    assert list(labels) == list(np.repeat(np.arange(20), 5))


def test_modularity_matches_networkx():
    g = erdos_renyi(80, 0.08, seed=2)
    labels = detect_communities(g, seed=2)
    ref = nx.Graph()
    ref.add_nodes_from(range(80))
    ref.add_edges_from(g.edges().tolist())
    parts = [set(np.flatnonzero(labels == c).tolist()) for c in range(labels.max() + 1)]
    assert modularity(g, labels) == pytest.approx(nx.community.modularity(ref, parts), abs=1e-12)


def test_quality_close_to_louvain():
    g = erdos_renyi(300, 0.03, seed=5)
    ref = nx.Graph()
    ref.add_nodes_from(range(300))
    ref.add_edges_from(g.edges().tolist())
    louvain = nx.community.modularity(ref, nx.community.louvain_communities(ref, seed=0))
    assert modularity(g, detect_communities(g, seed=5)) >= louvain - 0.02


def test_deterministic_given_seed():
    g = erdos_renyi(200, 0.05, seed=8)
    assert np.array_equal(detect_communities(g, seed=4), detect_communities(g, seed=4))


@settings(max_examples=80, deadline=None)
@given(small_graphs(max_n=12))
def test_communities_are_connected_and_labelled_densely(g):
    labels = detect_communities(g, seed=0)
    assert len(labels) == g.n_vertices
    k = labels.max() + 1
    assert set(labels.tolist()) == set(range(k))
    for c in range(k):
        members = np.flatnonzero(labels == c)
        sub = induced_subgraph(g, members).graph
        n_comp, _ = csgraph.connected_components(sub.adjacency(), directed=False)
        assert n_comp == 1
