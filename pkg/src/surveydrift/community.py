"""Modularity-based community detection (Leiden scheme).

Each level runs a queue-driven local moving phase, refines every community
by merging only well-connected singletons within it, and aggregates the
refined partition into a smaller weighted graph whose initial partition is
the unrefined one. Communities of the result are always internally
connected.
"""

from __future__ import annotations

from collections import deque

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .graph import Graph
from .rng import make_rng


class _Level:
    """Weighted undirected graph; self-loop weights kept apart from the CSR."""

    __slots__ = ("n", "indptr", "indices", "weights", "loops", "strength")

    def __init__(self, mat: sp.csr_matrix):
        mat = sp.csr_matrix(mat)
        self.n = mat.shape[0]
        self.loops = mat.diagonal().copy()
        mat.setdiag(0)
        mat.eliminate_zeros()
        mat.sort_indices()
        self.indptr, self.indices, self.weights = mat.indptr, mat.indices, mat.data
        self.strength = np.asarray(mat.sum(axis=1)).ravel() + self.loops


def _move_nodes(lv: _Level, comm: np.ndarray, m2: float, gamma: float, rng) -> bool:
    """Fast local moving; mutates ``comm``. Returns True if any node moved."""
    n = lv.n
    k = lv.strength
    tot = np.bincount(comm, weights=k, minlength=n)
    size = np.bincount(comm, minlength=n)
    empties = [c for c in range(n) if size[c] == 0]
    order = rng.permutation(n)
    queue = deque(order.tolist())
    queued = np.ones(n, dtype=bool)
    moved = False
    indptr, indices, weights = lv.indptr, lv.indices, lv.weights
    while queue:
        v = queue.popleft()
        queued[v] = False
        lo, hi = indptr[v], indptr[v + 1]
        nb, w = indices[lo:hi], weights[lo:hi]
        cv = comm[v]
        kv = k[v]
        tot[cv] -= kv
        size[cv] -= 1
        cand, inv = np.unique(comm[nb], return_inverse=True)
        wc = np.bincount(inv, weights=w, minlength=len(cand))
        gains = wc - gamma * kv * tot[cand] / m2
        pos = np.searchsorted(cand, cv)
        stay = gains[pos] if pos < len(cand) and cand[pos] == cv else -gamma * kv * tot[cv] / m2
        best_i = int(np.argmax(gains)) if len(cand) else -1
        best_gain = gains[best_i] if best_i >= 0 else -np.inf
        target = cv
        if best_gain > stay + 1e-12 and best_gain >= 0.0:
            target = int(cand[best_i])
        elif stay < -1e-12 and best_gain < 0.0 and size[cv] > 0:
            # isolate v in an empty community
            target = empties.pop() if empties else cv
        tot[target] += kv
        size[target] += 1
        if target != cv:
            if size[cv] == 0:
                empties.append(cv)
            comm[v] = target
            moved = True
            for u in nb[comm[nb] != target].tolist():
                if not queued[u]:
                    queued[u] = True
                    queue.append(u)
    return moved


def _refine(lv: _Level, comm: np.ndarray, m2: float, gamma: float, theta: float, rng) -> np.ndarray:
    n = lv.n
    k = lv.strength
    ref = np.arange(n)
    ref_tot = k.copy()
    ref_size = np.ones(n, dtype=np.int64)
    comm_tot = np.bincount(comm, weights=k, minlength=n)
    indptr, indices, weights = lv.indptr, lv.indices, lv.weights
    # weight from each node to the rest of its own community
    ext = np.zeros(n)
    for v in range(n):
        lo, hi = indptr[v], indptr[v + 1]
        same = comm[indices[lo:hi]] == comm[v]
        ext[v] = weights[lo:hi][same].sum()
    ref_ext = ext.copy()
    for v in rng.permutation(n).tolist():
        if ref_size[ref[v]] != 1:
            continue
        s = comm[v]
        ks = comm_tot[s]
        if ext[v] < gamma * k[v] * (ks - k[v]) / m2:
            continue
        lo, hi = indptr[v], indptr[v + 1]
        nb, w = indices[lo:hi], weights[lo:hi]
        inside = comm[nb] == s
        if not inside.any():
            continue
        cand, inv = np.unique(ref[nb[inside]], return_inverse=True)
        wc = np.bincount(inv, weights=w[inside], minlength=len(cand))
        ct = ref_tot[cand]
        ok = (cand != ref[v]) & (ref_ext[cand] >= gamma * ct * (ks - ct) / m2)
        gains = wc - gamma * k[v] * ct / m2
        ok &= gains >= 0.0
        if not ok.any():
            continue
        g = gains[ok]
        p = np.exp((g - g.max()) / theta)
        choice = rng.choice(len(g), p=p / p.sum())
        c = int(cand[ok][choice])
        w_vc = wc[ok][choice]
        old = ref[v]
        ref[v] = c
        ref_size[old] -= 1
        ref_size[c] += 1
        ref_tot[c] += k[v]
        ref_ext[c] = ref_ext[c] + ext[v] - 2.0 * w_vc
    return ref


def _relabel(labels: np.ndarray) -> np.ndarray:
    """Relabel to 0..K-1 in order of first appearance."""
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv]


def _split_disconnected(g: Graph, labels: np.ndarray) -> np.ndarray:
    a = g.undirected.adjacency().tocoo()
    keep = labels[a.row] == labels[a.col]
    inner = sp.csr_matrix((a.data[keep], (a.row[keep], a.col[keep])), shape=a.shape)
    _, comp = csgraph.connected_components(inner, directed=False)
    return _relabel(comp)


def detect_communities(
    g: Graph,
    seed: int,
    resolution: float = 1.0,
    theta: float = 0.01,
    max_levels: int = 64,
) -> np.ndarray:
    """Partition vertices into communities of high modularity.

    Edge orientation is ignored. Returns one label per vertex, numbered
    ``0..K-1`` in order of each community's smallest vertex id. An edgeless
    graph yields one community per vertex. Deterministic given ``seed``.
    """
    u = g.undirected
    n = u.n_vertices
    if u.edge_count == 0:
        return np.arange(n)
    rng = make_rng(seed)
    lv = _Level(u.adjacency())
    m2 = float(lv.strength.sum())
    comm = np.arange(n)
    node_map = np.arange(n)  # original vertex -> node of current level
    for _ in range(max_levels):
        _move_nodes(lv, comm, m2, resolution, rng)
        n_comm = len(np.unique(comm))
        if n_comm == lv.n:
            break
        ref = _relabel(_refine(lv, comm, m2, resolution, theta, rng))
        n_ref = int(ref.max()) + 1
        if n_ref == lv.n:
            # refinement made no merge; aggregate on the moved partition instead
            ref = _relabel(comm)
            n_ref = int(ref.max()) + 1
        member = sp.csr_matrix((np.ones(lv.n), (np.arange(lv.n), ref)), shape=(lv.n, n_ref))
        adj = sp.csr_matrix((lv.weights, lv.indices, lv.indptr), shape=(lv.n, lv.n))
        adj = adj + sp.diags(lv.loops)
        agg = (member.T @ adj @ member).tocsr()
        new_comm = np.empty(n_ref, dtype=np.int64)
        new_comm[ref] = comm
        comm = _relabel(new_comm)
        node_map = ref[node_map]
        lv = _Level(agg)
    labels = comm[node_map]
    return _split_disconnected(u, labels)


def modularity(g: Graph, labels: np.ndarray, resolution: float = 1.0) -> float:
    """Newman modularity of a partition of the undirected view of ``g``."""
    u = g.undirected
    if u.edge_count == 0:
        return 0.0
    m = u.edge_count
    deg = u.degrees.astype(np.float64)
    e = u.edges()
    inside = np.count_nonzero(labels[e[:, 0]] == labels[e[:, 1]])
    tot = np.bincount(labels, weights=deg)
    return inside / m - resolution * float((tot**2).sum()) / (4.0 * m * m)
