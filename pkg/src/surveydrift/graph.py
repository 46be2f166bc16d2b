"""Immutable population graphs stored in CSR form.

Vertices are dense integer ids ``0..n_vertices-1``. Adjacency lists are sorted
by neighbour id so that every iteration order (and therefore every seeded run)
is deterministic. For directed graphs the stored lists are out-neighbours.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

log = logging.getLogger(__name__)


class GraphError(ValueError):
    """Invalid vertex ids or vertex sets."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Directed or undirected simple graph.

    Attributes
    ----------
    n_vertices : int
    directed : bool
    indptr, indices : ndarray
        CSR adjacency; ``indices[indptr[v]:indptr[v+1]]`` are the (out-)neighbours
        of ``v`` in ascending order.
    self_loops_dropped : int
        Number of self-loops discarded while building the graph.
    """

    n_vertices: int
    directed: bool
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)
    self_loops_dropped: int = 0

    def __post_init__(self) -> None:
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_edges(
        cls,
        n_vertices: int,
        edges: Iterable[tuple[int, int]] | np.ndarray,
        directed: bool = False,
    ) -> Graph:
        """Build a graph from an edge list.

        Duplicate edges are merged silently; self-loops are dropped and counted.
        """
        arr = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n_vertices):
            raise GraphError(f"edge endpoint outside [0, {n_vertices})")
        loops = arr[:, 0] == arr[:, 1]
        n_loops = int(loops.sum())
        if n_loops:
            log.warning("dropped %d self-loop(s)", n_loops)
        arr = arr[~loops]
        if not directed:
            arr = np.sort(arr, axis=1)
            arr = np.concatenate([arr, arr[:, ::-1]])
        src, dst = arr[:, 0], arr[:, 1]
        return cls._from_arcs(n_vertices, src, dst, directed, n_loops)

    @classmethod
    def _from_arcs(cls, n, src, dst, directed, n_loops=0) -> Graph:
        if len(src):
            key = np.unique(src.astype(np.int64) * n + dst)
            src, dst = key // n, key % n
        counts = np.bincount(src, minlength=n) if len(src) else np.zeros(n, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(n, directed, indptr, np.asarray(dst, dtype=np.int64), n_loops)

    @classmethod
    def empty(cls, n_vertices: int, directed: bool = False) -> Graph:
        return cls.from_edges(n_vertices, np.empty((0, 2), dtype=np.int64), directed)

    @property
    def edge_count(self) -> int:
        arcs = len(self.indices)
        return arcs if self.directed else arcs // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        """(Out-)degree of every vertex."""
        d = np.diff(self.indptr)
        d.setflags(write=False)
        return d

    def neighbors(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def edges(self) -> np.ndarray:
        """Edge array of shape (m, 2); undirected edges appear once with u < v."""
        src = np.repeat(np.arange(self.n_vertices), self.degrees)
        arr = np.column_stack([src, self.indices])
        if not self.directed:
            arr = arr[arr[:, 0] < arr[:, 1]]
        return arr

    def adjacency(self) -> sp.csr_matrix:
        """0/1 adjacency matrix (row = source)."""
        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix(
            (data, self.indices, self.indptr), shape=(self.n_vertices, self.n_vertices)
        )

    @cached_property
    def undirected(self) -> Graph:
        """Same vertex set with edge orientation dropped (self if already undirected)."""
        if not self.directed:
            return self
        return Graph.from_edges(self.n_vertices, self.edges(), directed=False)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n_vertices:
            raise GraphError(f"vertex {v} outside [0, {self.n_vertices})")


def degree(g: Graph, v: int) -> int:
    """Number of (out-)neighbours of ``v``."""
    g._check_vertex(v)
    return int(g.indptr[v + 1] - g.indptr[v])


class Subgraph(NamedTuple):
    graph: Graph
    vertex_ids: np.ndarray  # new id -> old id


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Subgraph:
    """Vertex-induced subgraph, re-indexed in the order ``vertices`` is given.

    Returns the subgraph together with the new->old id map (``vertex_ids``);
    the old->new map is its inverse.
    """
    vs = np.asarray(list(vertices) if not isinstance(vertices, np.ndarray) else vertices, dtype=np.int64)
    if vs.size and (vs.min() < 0 or vs.max() >= g.n_vertices):
        raise GraphError("vertex set is not a subset of the graph's vertices")
    if len(np.unique(vs)) != len(vs):
        raise GraphError("duplicate vertex ids in vertex set")
    new_id = np.full(g.n_vertices, -1, dtype=np.int64)
    new_id[vs] = np.arange(len(vs))
    starts, stops = g.indptr[vs], g.indptr[vs + 1]
    lengths = stops - starts
    src_new = np.repeat(np.arange(len(vs)), lengths)
    if lengths.sum():
        pos = np.concatenate([np.arange(a, b) for a, b in zip(starts, stops)])
        dst_new = new_id[g.indices[pos]]
    else:
        dst_new = np.empty(0, dtype=np.int64)
    keep = dst_new >= 0
    sub = Graph._from_arcs(len(vs), src_new[keep], dst_new[keep], g.directed)
    vs.setflags(write=False)
    return Subgraph(sub, vs)


def long_range_pair_count(g: Graph) -> int:
    """Ordered pairs ``(r, s)``, ``r != s``, with ``s`` reachable from ``r`` in one or two hops.

    This is the double sum over ``r != s`` of the indicator ``A + A^2 >= 1``;
    each unordered pair of an undirected graph therefore counts twice. Edge
    orientation is followed for directed graphs.
    """
    total = 0
    mark = np.full(g.n_vertices, -1, dtype=np.int64)
    indptr, indices = g.indptr, g.indices
    for v in range(g.n_vertices):
        nb = indices[indptr[v] : indptr[v + 1]]
        if not len(nb):
            continue
        mark[nb] = v
        starts, stops = indptr[nb], indptr[nb + 1]
        if (stops - starts).sum():
            two = np.concatenate([indices[a:b] for a, b in zip(starts, stops)])
            mark[two] = v
        mark[v] = -1
        total += int(np.count_nonzero(mark == v))
    return total


class GraphStats(NamedTuple):
    avg_degree: float
    clustering_coefficient: float
    avg_path_length: float
    giant_component_size: int


def graph_stats(g: Graph, chunk: int = 512) -> GraphStats:
    """Average degree, average local clustering, giant-component path length.

    Clustering and path lengths are computed on the undirected view; vertices
    of degree < 2 contribute a local coefficient of 0. The path length is the
    mean shortest-path length over all connected ordered pairs of the largest
    weakly connected component.
    """
    n = g.n_vertices
    if n == 0:
        return GraphStats(0.0, 0.0, 0.0, 0)
    avg_degree = g.edge_count / n if g.directed else 2.0 * g.edge_count / n

    u = g.undirected
    a = u.adjacency()
    deg = u.degrees.astype(np.float64)
    tri = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    pairs = deg * (deg - 1) / 2.0
    local = np.divide(tri, pairs, out=np.zeros(n), where=pairs > 0)
    clustering = float(local.mean())

    _, labels = csgraph.connected_components(a, directed=False)
    giant_label = np.bincount(labels).argmax()
    giant = np.flatnonzero(labels == giant_label)
    sub = induced_subgraph(u, giant).graph.adjacency()
    k = len(giant)
    total, count = 0.0, 0
    for lo in range(0, k, chunk):
        dist = csgraph.shortest_path(sub, unweighted=True, directed=False, indices=np.arange(lo, min(lo + chunk, k)))
        finite = np.isfinite(dist) & (dist > 0)
        total += float(dist[finite].sum())
        count += int(finite.sum())
    apl = total / count if count else 0.0
    return GraphStats(float(avg_degree), clustering, apl, int(k))
