"""Respondent-selection strategies."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .community import detect_communities
from .graph import Graph, induced_subgraph
from .rng import make_rng


class Strategy(str, enum.Enum):
    INDEPENDENT_SET = "independent"
    CLUSTER = "cluster"
    RANDOM = "random"


@dataclass(frozen=True, eq=False)
class SampleDesign:
    """Selected respondents and the subgraph they induce.

    ``respondent_ids[k]`` is the population id of subgraph vertex ``k``.
    """

    strategy: Strategy
    respondent_ids: np.ndarray
    subgraph: Graph
    cluster_assignment: Optional[np.ndarray] = None
    clusters_selected: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.respondent_ids)


def _check_budget(g: Graph, budget: int) -> None:
    if not 1 <= budget <= g.n_vertices:
        raise ValueError(f"budget must lie in [1, {g.n_vertices}], got {budget}")


def independent_set_sample(g: Graph, size_limit: int, seed: int) -> SampleDesign:
    """Random-order greedy independent set of at most ``size_limit`` vertices.

    A uniformly random surviving vertex joins the set and is deleted with its
    neighbours, until nothing survives or the set has reached ``size_limit``.
    Edge orientation is ignored.
    """
    if size_limit < 1:
        raise ValueError("size_limit must be at least 1")
    u = g.undirected
    rng = make_rng(seed)
    alive = np.ones(u.n_vertices, dtype=bool)
    chosen: list[int] = []
    # visiting a random permutation and skipping deleted vertices picks each
    # next vertex uniformly among the survivors
    for v in rng.permutation(u.n_vertices).tolist():
        if len(chosen) >= size_limit:
            break
        if not alive[v]:
            continue
        chosen.append(v)
        alive[v] = False
        alive[u.indices[u.indptr[v] : u.indptr[v + 1]]] = False
    ids = np.array(chosen, dtype=np.int64)
    sub = induced_subgraph(g, ids)
    if sub.graph.edge_count:
        raise RuntimeError("greedy selection produced an adjacent pair")
    return SampleDesign(Strategy.INDEPENDENT_SET, sub.vertex_ids, sub.graph)


def cluster_sample(
    g: Graph,
    budget: int,
    seed: int,
    labels: Optional[np.ndarray] = None,
    community_seed: Optional[int] = None,
    isolate_clusters: bool = False,
) -> SampleDesign:
    """Whole communities in random order, then a uniform part of the next one.

    ``labels`` may carry a precomputed partition; otherwise communities are
    detected with ``community_seed`` (defaulting to ``seed``). The subgraph is
    induced, so edges between selected communities are kept unless
    ``isolate_clusters`` drops them.
    """
    _check_budget(g, budget)
    if labels is None:
        labels = detect_communities(g, seed if community_seed is None else community_seed)
    labels = np.asarray(labels)
    rng = make_rng(seed)
    n_clusters = int(labels.max()) + 1
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(n_clusters + 1))
    picked: list[np.ndarray] = []
    remaining = budget
    selected = 0
    for c in rng.permutation(n_clusters).tolist():
        members = order[bounds[c] : bounds[c + 1]]
        selected += 1
        if len(members) <= remaining:
            picked.append(members)
            remaining -= len(members)
        else:
            picked.append(np.sort(rng.choice(members, size=remaining, replace=False)))
            remaining = 0
        if remaining == 0:
            break
    ids = np.concatenate(picked)
    assignment = labels[ids]
    sub = induced_subgraph(g, ids).graph
    if isolate_clusters and sub.edge_count:
        arcs = _arcs(sub)
        keep = assignment[arcs[:, 0]] == assignment[arcs[:, 1]]
        sub = Graph.from_edges(sub.n_vertices, arcs[keep], sub.directed)
    return SampleDesign(Strategy.CLUSTER, ids, sub, assignment, selected)


def _arcs(g: Graph) -> np.ndarray:
    src = np.repeat(np.arange(g.n_vertices), np.diff(g.indptr))
    return np.column_stack([src, g.indices])


def random_sample(g: Graph, budget: int, seed: int) -> SampleDesign:
    """Uniform sample of ``budget`` vertices without replacement."""
    _check_budget(g, budget)
    ids = make_rng(seed).choice(g.n_vertices, size=budget, replace=False)
    sub = induced_subgraph(g, ids)
    return SampleDesign(Strategy.RANDOM, sub.vertex_ids, sub.graph)


def mis_upper_bound(g: Graph) -> float:
    """``|V| - |E| / max degree``; ``|V|`` for an edgeless graph."""
    u = g.undirected
    if u.edge_count == 0:
        return float(u.n_vertices)
    return u.n_vertices - u.edge_count / float(u.degrees.max())


__all__ = [
    "SampleDesign",
    "Strategy",
    "cluster_sample",
    "detect_communities",
    "independent_set_sample",
    "mis_upper_bound",
    "random_sample",
]
