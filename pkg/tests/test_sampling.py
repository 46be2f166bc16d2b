import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_force_mis, small_graphs
from surveydrift.graph import Graph
from surveydrift.netgen import disjoint_cliques, erdos_renyi
from surveydrift.sampling import (
    Strategy,
    cluster_sample,
    independent_set_sample,
    mis_upper_bound,
    random_sample,
)


def complete(n):
    return Graph.from_edges(n, list(itertools.combinations(range(n), 2)))


def test_independent_set_examples(path3):
    assert independent_set_sample(complete(7), 5, seed=0).size == 1
    assert independent_set_sample(Graph.empty(10), 4, seed=0).size == 4
    seen = {tuple(sorted(independent_set_sample(path3, 10, seed=s).respondent_ids.tolist())) for s in range(40)}
    assert seen == {(1,), (0, 2)}


def test_independent_set_ignores_direction():
    g = Graph.from_edges(2, [(0, 1)], directed=True)
    assert all(independent_set_sample(g, 5, seed=s).size == 1 for s in range(10))


def test_independent_set_rejects_zero_limit():
    with pytest.raises(ValueError):
        independent_set_sample(Graph.empty(3), 0, seed=0)


def test_independent_set_is_edgeless_on_many_graphs():
    rng = np.random.default_rng(0)
    for k in range(1000):
        n = int(rng.integers(1, 40))
        g = erdos_renyi(n, float(rng.uniform(0, 0.5)), seed=k)
        s = independent_set_sample(g, int(rng.integers(1, 50)), seed=k)
        assert s.subgraph.edge_count == 0
        assert s.strategy is Strategy.INDEPENDENT_SET


@settings(max_examples=100, deadline=None)
@given(small_graphs(max_n=10), st.integers(0, 10_000))
def test_independent_set_below_theorem_bound(g, seed):
    s = independent_set_sample(g, 10**9, seed)
    alpha = brute_force_mis(g)
    assert s.size <= alpha <= mis_upper_bound(g) + 1e-12


def test_mis_upper_bound_examples(path3):
    assert mis_upper_bound(complete(6)) == 3.0
    star = Graph.from_edges(5, [(0, k) for k in range(1, 5)])
    assert mis_upper_bound(star) == 4.0 == brute_force_mis(star)
    assert mis_upper_bound(path3) == 2.0 == brute_force_mis(path3)
    assert mis_upper_bound(Graph.empty(4)) == 4.0


def test_cluster_examples():
    g = disjoint_cliques(5, 2)
    s = cluster_sample(g, 4, seed=1)
    assert s.size == 4 and s.clusters_selected == 2 and s.subgraph.edge_count == 2
    s = cluster_sample(g, 3, seed=1)
    assert s.size == 3 and s.clusters_selected == 2
    s = cluster_sample(g, 10, seed=1)
    assert s.size == 10 and s.clusters_selected == 5


def test_cluster_budget_checks():
    with pytest.raises(ValueError):
        cluster_sample(Graph.empty(3), 4, seed=0)
    with pytest.raises(ValueError):
        random_sample(Graph.empty(3), 0, seed=0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(1, 6), st.integers(0, 1000), st.data())
def test_cluster_hits_budget_without_cross_edges_on_components(count, size, seed, data):
    g = disjoint_cliques(count, size)
    budget = data.draw(st.integers(1, count * size))
    s = cluster_sample(g, budget, seed)
    assert s.size == budget
    assert len(set(s.respondent_ids.tolist())) == budget
    lab = s.cluster_assignment
    e = s.subgraph.edges()
    assert np.all(lab[e[:, 0]] == lab[e[:, 1]])


def test_isolate_clusters_drops_cross_edges():
    g = erdos_renyi(200, 0.1, seed=3)
    labels = np.arange(200) % 20
    full = cluster_sample(g, 60, seed=2, labels=labels)
    iso = cluster_sample(g, 60, seed=2, labels=labels, isolate_clusters=True)
    assert np.array_equal(full.respondent_ids, iso.respondent_ids)
    e = iso.subgraph.edges()
    assert np.all(iso.cluster_assignment[e[:, 0]] == iso.cluster_assignment[e[:, 1]])
    assert iso.subgraph.edge_count < full.subgraph.edge_count


def test_random_examples():
    g = erdos_renyi(30, 0.2, seed=1)
    s = random_sample(g, 30, seed=0)
    assert sorted(s.respondent_ids.tolist()) == list(range(30))
    assert s.subgraph.edge_count == g.edge_count
    assert random_sample(g, 1, seed=0).subgraph.edge_count == 0


def test_random_subgraph_edge_count_expectation():
    counts = [random_sample(erdos_renyi(500, 0.45, seed=s), 50, seed=s + 1).subgraph.edge_count for s in range(200)]
    assert abs(np.mean(counts) - 1225 * 0.45) < 40


@pytest.mark.parametrize("fn", [lambda g, s: independent_set_sample(g, 20, s),
                                lambda g, s: cluster_sample(g, 20, s),
                                lambda g, s: random_sample(g, 20, s)])
def test_same_seed_same_sample(fn):
    g = erdos_renyi(200, 0.03, seed=7)
    assert np.array_equal(fn(g, 5).respondent_ids, fn(g, 5).respondent_ids)
