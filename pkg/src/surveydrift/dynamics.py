"""One synchronous DeGroot step over a sampled subgraph."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .dist import DistributionSpec
from .graph import Graph
from .rng import make_rng


class Rule(str, enum.Enum):
    AVERAGE = "average"
    WEIGHTED = "weighted"


class SelfWeight(str, enum.Enum):
    DRAWN = "drawn"
    ZERO = "zero"


@dataclass(frozen=True, eq=False)
class InteractionMatrix:
    """Row-stochastic weights ``a_ij``; row ``i`` touches only ``i`` and its (out-)neighbours."""

    matrix: sp.csr_matrix
    rule: Rule

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Column ids and weights of row ``i``."""
        lo, hi = self.matrix.indptr[i], self.matrix.indptr[i + 1]
        return self.matrix.indices[lo:hi], self.matrix.data[lo:hi]

    def row_square_sums(self) -> np.ndarray:
        """``sum_j a_ij**2`` for every row."""
        return np.asarray(self.matrix.multiply(self.matrix).sum(axis=1)).ravel()


def init_beliefs(d: DistributionSpec, n: int, seed: int) -> np.ndarray:
    """``n`` i.i.d. initial beliefs drawn from ``d``."""
    if n < 1:
        raise ValueError("need at least one respondent")
    return d.sample(make_rng(seed), n)


def _closed_pattern(subgraph: Graph) -> sp.csr_matrix:
    """Sparsity pattern of I + A with explicit ones, indices sorted."""
    n = subgraph.n_vertices
    pattern = subgraph.adjacency() + sp.identity(n, format="csr")
    pattern = sp.csr_matrix(pattern)
    pattern.sort_indices()
    pattern.data[:] = 1.0
    return pattern


def normalize_rows(pattern: sp.csr_matrix, raw: np.ndarray, rule: Rule) -> InteractionMatrix:
    """Divide raw non-negative weights (one per stored entry) by their row sums."""
    m = sp.csr_matrix((np.asarray(raw, dtype=np.float64), pattern.indices, pattern.indptr), shape=pattern.shape)
    sums = np.asarray(m.sum(axis=1)).ravel()
    if np.any(sums <= 0):
        raise ValueError("row with zero total weight")
    # divide rather than multiply by 1/sum so that x / x == 1 exactly
    m.data = m.data / np.repeat(sums, np.diff(m.indptr))
    m.sort_indices()
    return InteractionMatrix(m, rule)


def build_interaction_matrix(
    subgraph: Graph,
    rule: Rule | str = Rule.AVERAGE,
    seed: int | None = None,
    self_weight: SelfWeight | str = SelfWeight.DRAWN,
) -> InteractionMatrix:
    """Interaction weights over ``{i} U N_i`` (out-neighbours when directed).

    ``average``: ``a_ij = 1 / (|N_i| + 1)``.
    ``weighted``: an independent Uniform(0, 1) raw weight per entry, rows
    normalised to one. With ``self_weight="zero"`` the self term is not drawn
    (isolated respondents still keep ``a_ii = 1``). A row whose draws are all
    exactly zero is redrawn.
    """
    rule = Rule(rule)
    self_weight = SelfWeight(self_weight)
    pattern = _closed_pattern(subgraph)
    if rule is Rule.AVERAGE:
        return normalize_rows(pattern, pattern.data, rule)
    if seed is None:
        raise ValueError("the weighted rule needs a seed")
    rng = make_rng(seed)
    raw = rng.random(len(pattern.data))
    rows = np.repeat(np.arange(pattern.shape[0]), np.diff(pattern.indptr))
    if self_weight is SelfWeight.ZERO:
        diag = pattern.indices == rows
        isolated = np.diff(pattern.indptr) == 1
        raw[diag & ~isolated[rows]] = 0.0
        raw[diag & isolated[rows]] = 1.0
    while True:
        sums = np.bincount(rows, weights=raw, minlength=pattern.shape[0])
        dead = np.flatnonzero(sums <= 0)
        if not len(dead):
            break
        redraw = np.isin(rows, dead)
        if self_weight is SelfWeight.ZERO:
            redraw &= pattern.indices != rows
        raw[redraw] = rng.random(int(redraw.sum()))
    return normalize_rows(pattern, raw, rule)


def update_beliefs(w: InteractionMatrix, x: np.ndarray, rounds: int = 1) -> np.ndarray:
    """Synchronous update ``x' = A x`` applied ``rounds`` times."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (w.n,):
        raise ValueError(f"belief vector of length {x.shape} does not match {w.n} respondents")
    for _ in range(rounds):
        x = w.matrix @ x
    return x
