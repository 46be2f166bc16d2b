"""Population-graph sources: random generators and a SNAP edge-list loader."""

from __future__ import annotations

import math
import os
from pathlib import Path

import numpy as np

from .graph import Graph, GraphError
from .rng import make_rng


class EdgeListParseError(ValueError):
    def __init__(self, path, lineno: int, line: str):
        super().__init__(f"{path}:{lineno}: expected two integer tokens, got {line!r}")
        self.lineno = lineno


def _pair_from_index(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # Row-major enumeration of the strict upper triangle.
    k = k.astype(np.int64)
    i = (n - 2 - np.floor(np.sqrt(-8.0 * k + 4.0 * n * (n - 1) - 7) / 2.0 - 0.5)).astype(np.int64)
    row_start = i * (2 * n - i - 1) // 2
    # guard against floating-point rounding at row boundaries
    low = k < row_start
    i[low] -= 1
    row_start = i * (2 * n - i - 1) // 2
    high = k >= row_start + (n - 1 - i)
    i[high] += 1
    row_start = i * (2 * n - i - 1) // 2
    j = k - row_start + i + 1
    return i, j


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each of the C(n, 2) pairs is an edge independently with probability p.

    Drawn as ``m ~ Binomial(C(n,2), p)`` followed by a uniform choice of ``m``
    distinct pairs, which has exactly the G(n, p) law.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    n_pairs = n * (n - 1) // 2
    m = int(rng.binomial(n_pairs, p)) if n_pairs else 0
    if m == 0:
        return Graph.empty(n)
    idx = rng.choice(n_pairs, size=m, replace=False)
    i, j = _pair_from_index(idx, n)
    return Graph.from_edges(n, np.column_stack([i, j]))


def scale_free_static(n: int, exponent: float, target_mean_degree: float, seed: int) -> Graph:
    """Static scale-free model.

    Vertex ``i`` carries weight ``(i + 1) ** -xi`` with ``xi = 1 / (exponent - 1)``;
    weighted pairs of distinct vertices are drawn and joined (if not already
    adjacent) until the graph holds ``round(n * target_mean_degree / 2)`` edges.
    """
    if exponent <= 2:
        raise ValueError("exponent must exceed 2")
    if target_mean_degree <= 0:
        raise ValueError("target_mean_degree must be positive")
    target = int(round(n * target_mean_degree / 2))
    if target > n * (n - 1) // 2:
        raise GraphError(f"cannot place {target} edges on {n} vertices")
    rng = make_rng(seed)
    xi = 1.0 / (exponent - 1.0)
    w = np.arange(1, n + 1, dtype=np.float64) ** -xi
    w /= w.sum()
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    while len(edges) < target:
        batch = max(64, 2 * (target - len(edges)))
        a = rng.choice(n, size=batch, p=w)
        b = rng.choice(n, size=batch, p=w)
        for u, v in zip(a.tolist(), b.tolist()):
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                continue
            seen.add(key)
            edges.append(key)
            if len(edges) == target:
                break
    return Graph.from_edges(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


def disjoint_cliques(count: int, size: int) -> Graph:
    """``count`` vertex-disjoint copies of the complete graph K_size."""
    iu, ju = np.triu_indices(size, 1)
    offsets = np.arange(count)[:, None] * size
    edges = np.column_stack([(iu + offsets).ravel(), (ju + offsets).ravel()])
    return Graph.from_edges(count * size, edges)


def load_edge_list(path: str | os.PathLike, directed: bool = False) -> Graph:
    """Read a SNAP-style edge list.

    One edge per line as two whitespace-separated integers; lines starting
    with ``#`` and blank lines are skipped. Original ids are compacted to
    ``0..k-1`` in ascending order of the original id. Parallel edges are
    merged and self-loops dropped (their endpoints still count as vertices).
    """
    pairs: list[tuple[int, int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListParseError(path, lineno, line)
            try:
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise EdgeListParseError(path, lineno, line) from None
    if not pairs:
        return Graph.empty(0, directed)
    arr = np.array(pairs, dtype=np.int64)
    ids, compact = np.unique(arr, return_inverse=True)
    return Graph.from_edges(len(ids), compact.reshape(-1, 2), directed)


def write_edge_list(g: Graph, path: str | os.PathLike) -> None:
    """Debug dump in the same format ``load_edge_list`` reads.

    Isolated vertices are not representable and are lost on reload.
    """
    kind = "Directed" if g.directed else "Undirected"
    lines = [f"# {kind} graph: {g.n_vertices} vertices, {g.edge_count} edges"]
    lines += [f"{u} {v}" for u, v in g.edges().tolist()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def er_probability_ladder(n: int) -> list[float]:
    """The six E-R densities n^-2, n^-1.5, n^-1, n^-0.5, n^-0.25, n^-0.125."""
    return [math.pow(n, -e) for e in (2.0, 1.5, 1.0, 0.5, 0.25, 0.125)]
