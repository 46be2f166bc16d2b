import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_graphs
from surveydrift.dynamics import Rule, SelfWeight, build_interaction_matrix, normalize_rows, update_beliefs, _closed_pattern
from surveydrift.graph import Graph
from surveydrift.netgen import disjoint_cliques


def test_average_rule_on_path(path3):
    w = build_interaction_matrix(path3)
    assert np.allclose(w.matrix.toarray(), [[0.5, 0.5, 0], [1 / 3, 1 / 3, 1 / 3], [0, 0.5, 0.5]])
    assert np.allclose(update_beliefs(w, [0.0, 1.0, 2.0]), [0.5, 1.0, 1.5])


def test_clique_members_reach_clique_mean():
    g = disjoint_cliques(1, 4)
    x = np.array([0.1, 0.7, 0.3, 0.9])
    y = update_beliefs(build_interaction_matrix(g), x)
    assert np.allclose(y, x.mean())


def test_isolated_vertices_keep_beliefs():
    x = np.array([0.2, 0.4, 0.6])
    for rule in Rule:
        w = build_interaction_matrix(Graph.empty(3), rule, seed=1)
        assert np.array_equal(update_beliefs(w, x), x)


def test_directed_uses_out_neighbours():
    g = Graph.from_edges(3, [(0, 1), (0, 2)], directed=True)
    y = update_beliefs(build_interaction_matrix(g), np.array([0.0, 3.0, 6.0]))
    assert np.allclose(y, [3.0, 3.0, 6.0])


def test_weighted_needs_seed(path3):
    with pytest.raises(ValueError):
        build_interaction_matrix(path3, "weighted")


def test_weighted_zero_self_weight(path3):
    w = build_interaction_matrix(path3, "weighted", seed=2, self_weight=SelfWeight.ZERO)
    assert np.allclose(w.matrix.diagonal(), 0.0)
    assert np.allclose(w.matrix.sum(axis=1), 1.0)


def test_equal_raw_weights_reproduce_average(path3):
    pattern = _closed_pattern(path3)
    w = normalize_rows(pattern, np.full(len(pattern.data), 0.37), Rule.WEIGHTED)
    assert np.allclose(w.matrix.toarray(), build_interaction_matrix(path3).matrix.toarray())


def test_dimension_mismatch(path3):
    with pytest.raises(ValueError):
        update_beliefs(build_interaction_matrix(path3), np.zeros(4))


@settings(max_examples=100, deadline=None)
@given(small_graphs(max_n=10), st.sampled_from(list(Rule)), st.integers(0, 2**32))
def test_rows_stochastic_and_local(g, rule, seed):
    w = build_interaction_matrix(g, rule, seed=seed)
    m = w.matrix.toarray()
    assert np.allclose(m.sum(axis=1), 1.0)
    assert np.all(m >= 0)
    allowed = g.adjacency().toarray() + np.eye(g.n_vertices)
    assert np.all(m[allowed == 0] == 0)
    s2 = w.row_square_sums()
    deg = g.degrees
    assert np.all(s2 >= 1.0 / (deg + 1) - 1e-12) and np.all(s2 <= 1 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=10), st.integers(0, 1000))
def test_update_stays_within_belief_range(g, seed):
    x = np.random.default_rng(seed).normal(size=g.n_vertices)
    y = update_beliefs(build_interaction_matrix(g, "weighted", seed=seed), x)
    assert y.min() >= x.min() - 1e-12 and y.max() <= x.max() + 1e-12
