"""Upper-bound evaluators for the expected W1 error of each sampling design.

Every evaluator splits its bound into named terms. Integrals of the form
``int sqrt(G(1 - G)) dt`` are taken by adaptive quadrature when ``G`` is
analytic and on a fine trapezoid grid when ``G`` is a Monte Carlo law or a
mixture of several laws. The ``O(<d>)/sqrt(n)`` remainder of the random and
weighted bounds is evaluated in its explicit proof form
``sqrt((<d> + <d>^2) n) / n * int sqrt(C_t) dt`` with
``C_t = max_i G_i(t)(1 - G_i(t))``; this is one valid constant choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np
from scipy import integrate

from .dist import CdfLike, DistributionSpec, EmpiricalDistribution, Normal, sample_mean_distribution
from .dynamics import InteractionMatrix
from .graph import Graph, long_range_pair_count
from .ot import qq_pearson
from .rng import derive_seed, make_rng
from .sampling import random_sample

GRID_POINTS = 20001
DEGREE_MC_DRAWS = 200_000
WEIGHTED_MC_DRAWS = 100_000
LONG_RANGE_NOTE = "proof-form long-range term"


@dataclass(frozen=True)
class BoundBreakdown:
    total: float
    terms: dict = field(default_factory=dict)
    note: str = ""

    def __float__(self) -> float:
        return self.total


def _window(d: DistributionSpec) -> tuple[float, float]:
    return d.support


@lru_cache(maxsize=1)
def _std_normal_spread() -> float:
    # int sqrt(Phi (1 - Phi)) over [-12, 12]
    std = Normal(0.0, 1.0)
    val, _ = integrate.quad(lambda t: math.sqrt(max(float(std.cdf(t)) * (1.0 - float(std.cdf(t))), 0.0)),
                            -12.0, 12.0, epsabs=1e-10, epsrel=1e-10, limit=200)
    return val


def spread_integral(law: CdfLike) -> float:
    """``int sqrt(G(t)(1 - G(t))) dt`` for a single law ``G``."""
    if isinstance(law, Normal):
        return law.sigma * _std_normal_spread()
    if isinstance(law, EmpiricalDistribution):
        v = law.sorted_values
        m = len(v)
        k = np.arange(1, m) / m
        return float(np.sum(np.sqrt(k * (1.0 - k)) * np.diff(v)))
    lo, hi = law.support

    def f(t):
        c = float(law.cdf(t))
        return math.sqrt(max(c * (1.0 - c), 0.0))

    val, _ = integrate.quad(f, lo, hi, epsabs=1e-10, epsrel=1e-10, limit=200)
    return val


def _rho(law: CdfLike, mu: float, sigma: float) -> float:
    if isinstance(law, Normal):
        return 1.0
    return qq_pearson(law, Normal(mu, sigma))


def _gap(rho: float) -> float:
    return max(0.0, 1.0 - rho)


def indep_bound(d: DistributionSpec, n: int) -> float:
    """``(1/sqrt(n)) int sqrt(F(1 - F)) dt`` for an interaction-free sample of size ``n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return spread_integral(d) / math.sqrt(n)


def _power_law(d: DistributionSpec, r: int, m: int) -> CdfLike:
    """Law of the mean of ``r`` draws; ``d`` itself when ``r == 1``."""
    return d if r == 1 else sample_mean_distribution(d, r, m=m)


def clique_bound(d: DistributionSpec, p: int, r: int, m: int = 1_000_000) -> BoundBreakdown:
    """Bound for ``p`` disjoint cliques of size ``r`` (sample size ``p r``)."""
    if p < 1 or r < 1:
        raise ValueError("p and r must be at least 1")
    mu, sigma = d.mean, d.sd
    fr = _power_law(d, r, m)
    terms = {
        "clique_shrink": sigma * (1.0 - 1.0 / math.sqrt(r)),
        "sample_size": spread_integral(fr) / math.sqrt(p),
        "normality": sigma * math.sqrt(2.0 * _gap(_rho(d, mu, sigma))),
        "clique_normality": sigma * math.sqrt(2.0 / r * _gap(_rho(fr, mu, sigma / math.sqrt(r)))),
    }
    return BoundBreakdown(float(sum(terms.values())), terms)


class _Profile(NamedTuple):
    law: CdfLike
    rho: float
    spread: float


@lru_cache(maxsize=256)
def _degree_profile(d: DistributionSpec, r: int, m: int) -> _Profile:
    law = _power_law(d, r, m)
    return _Profile(law, _rho(law, d.mean, d.sd / math.sqrt(r)), spread_integral(law))


@lru_cache(maxsize=256)
def _grid_variance(d: DistributionSpec, r: int, m: int) -> np.ndarray:
    law = _degree_profile(d, r, m).law
    lo, hi = _window(d)
    c = np.asarray(law.cdf(np.linspace(lo, hi, GRID_POINTS)), dtype=np.float64)
    v = np.clip(c * (1.0 - c), 0.0, None)
    v.setflags(write=False)
    return v


def _mixture_spreads(variances: list[np.ndarray], counts: np.ndarray, lo: float, hi: float) -> tuple[float, float]:
    """Grid integrals of ``sqrt(sum_k c_k V_k)`` and ``sqrt(max_k V_k)``."""
    stack = np.vstack(variances)
    x = np.linspace(lo, hi, GRID_POINTS)
    total = np.sqrt(counts @ stack)
    peak = np.sqrt(stack.max(axis=0))
    return float(np.trapezoid(total, x)), float(np.trapezoid(peak, x))


def _long_range_factor(avg_degree: float, n: int) -> float:
    if avg_degree <= 0:
        return 0.0
    return math.sqrt((avg_degree + avg_degree**2) * n) / n


def _degree_bound(degrees: np.ndarray, d: DistributionSpec, avg_degree: float, m: int) -> BoundBreakdown:
    n = len(degrees)
    if n == 0:
        raise ValueError("subgraph has no respondents")
    mu, sigma = d.mean, d.sd
    classes, counts = np.unique(np.asarray(degrees, dtype=np.int64) + 1, return_counts=True)
    profiles = [_degree_profile(d, int(r), m) for r in classes]
    if len(classes) == 1:
        spread = profiles[0].spread
        sample_term = math.sqrt(counts[0]) * spread / n
        peak = spread
    else:
        lo, hi = _window(d)
        variances = [_grid_variance(d, int(r), m) for r in classes]
        total, peak = _mixture_spreads(variances, counts.astype(np.float64), lo, hi)
        sample_term = total / n
    rho_f = _rho(d, mu, sigma)
    terms = {
        "sample_size": sample_term,
        "interaction": sigma * (1.0 - float(np.sum(counts / np.sqrt(classes))) / n),
        "normality": sigma * math.sqrt(2.0 * _gap(rho_f)),
        "degree_normality": sigma / n * float(
            sum(c * math.sqrt(2.0 * _gap(pr.rho) / r) for c, r, pr in zip(counts, classes, profiles))
        ),
        "long_range": _long_range_factor(avg_degree, n) * peak,
    }
    return BoundBreakdown(float(sum(terms.values())), terms, LONG_RANGE_NOTE)


def random_bound(subgraph: Graph, d: DistributionSpec, m: int = DEGREE_MC_DRAWS) -> BoundBreakdown:
    """Bound for a uniformly drawn sample whose induced subgraph is ``subgraph``.

    Degrees are those of the subgraph (orientation dropped if it is directed).
    """
    u = subgraph.undirected
    deg = u.degrees
    avg = float(deg.mean()) if len(deg) else 0.0
    return _degree_bound(deg, d, avg, m)


def directed_bound(subgraph: Graph, d: DistributionSpec, m: int = DEGREE_MC_DRAWS) -> BoundBreakdown:
    """The random-sample bound with out-degrees in place of degrees."""
    if not subgraph.directed:
        raise ValueError("directed_bound needs a directed subgraph")
    deg = subgraph.degrees
    avg = float(deg.mean()) if len(deg) else 0.0
    return _degree_bound(deg, d, avg, m)


def _row_laws(w: InteractionMatrix, d: DistributionSpec, s2: np.ndarray, m: int, seed: int):
    """Law of ``sum_j a_ij X_j`` for every row ``i``."""
    if isinstance(d, Normal):
        return [Normal(d.mu, d.sigma * math.sqrt(v)) for v in s2]
    # One shared draw matrix: every row still sees i.i.d. X_j, which is all
    # each marginal law needs.
    x = d.sample(make_rng(seed), m * w.n).reshape(w.n, m)
    y = np.asarray(w.matrix @ x)
    y.sort(axis=1)
    return [EmpiricalDistribution(row) for row in y]


def weighted_bound(
    subgraph: Graph,
    w: InteractionMatrix,
    d: DistributionSpec,
    m: int = WEIGHTED_MC_DRAWS,
    seed: int = 0,
) -> BoundBreakdown:
    """Bound for a random sample updated with arbitrary row-stochastic weights."""
    n = w.n
    if n != subgraph.n_vertices:
        raise ValueError("interaction matrix does not match the subgraph")
    sums = np.asarray(w.matrix.sum(axis=1)).ravel()
    if not np.allclose(sums, 1.0, atol=1e-9):
        raise ValueError("interaction matrix is not row-stochastic")
    mu, sigma = d.mean, d.sd
    s2 = w.row_square_sums()
    deg = subgraph.degrees
    avg = float(deg.mean()) if len(deg) else 0.0

    if isinstance(d, Normal):
        # Normal row laws differ only through s2; group equal rows
        keys, counts = np.unique(s2, return_counts=True)
        laws = [Normal(mu, sigma * math.sqrt(v)) for v in keys]
        rhos = np.ones(n)
    else:
        laws = _row_laws(w, d, s2, m, seed)
        counts = np.ones(n)
        rhos = np.array([_rho(c, mu, sigma * math.sqrt(v)) for c, v in zip(laws, s2)])

    if len(laws) == 1:
        spread = spread_integral(laws[0])
        sample_term = math.sqrt(float(counts[0])) * spread / n
        peak = spread
    else:
        lo, hi = _window(d)
        x = np.linspace(lo, hi, GRID_POINTS)
        variances = []
        for law in laws:
            c = np.asarray(law.cdf(x), dtype=np.float64)
            variances.append(np.clip(c * (1.0 - c), 0.0, None))
        total, peak = _mixture_spreads(variances, np.asarray(counts, dtype=np.float64), lo, hi)
        sample_term = total / n

    gaps = np.sqrt(2.0 * np.clip(1.0 - rhos, 0.0, None))
    terms = {
        "sample_size": sample_term,
        "normality": sigma * math.sqrt(2.0 * _gap(_rho(d, mu, sigma))),
        "spread": sigma,
        "weighted_interaction": sigma / n * float(np.sum(np.sqrt(s2) * (gaps - 1.0))),
        "long_range": _long_range_factor(avg, n) * peak,
    }
    return BoundBreakdown(float(sum(terms.values())), terms, LONG_RANGE_NOTE)


class AssumptionCheck(NamedTuple):
    holds: bool
    lhs: int
    rhs: float
    claim1_prob: Optional[float]


def assumption_check(g: Graph, p: Optional[float] = None) -> AssumptionCheck:
    """Compare the count of within-two-hop ordered pairs to ``2 n (<d> + <d>^2)``.

    ``claim1_prob`` is ``1 - 2 / (|V| p^2)`` when the generating edge
    probability ``p`` is supplied; it is not clamped and can be negative.
    """
    n = g.n_vertices
    lhs = long_range_pair_count(g)
    avg = float(g.degrees.mean()) if n else 0.0
    rhs = 2.0 * n * (avg + avg * avg)
    prob = None
    if p is not None:
        prob = 1.0 - 2.0 / (n * p * p) if n and p > 0 else -math.inf
    return AssumptionCheck(lhs <= rhs, lhs, rhs, prob)


def expected_bound_mc(g: Graph, n: int, d: DistributionSpec, reps: int, seed: int) -> tuple[float, float]:
    """Mean and standard error of the random-sample bound over ``reps`` uniform samples."""
    if reps < 2:
        raise ValueError("reps must be at least 2")
    evaluate = directed_bound if g.directed else random_bound
    vals = np.array([evaluate(random_sample(g, n, derive_seed(seed, k)).subgraph, d).total for k in range(reps)])
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(reps))


__all__ = [
    "AssumptionCheck",
    "BoundBreakdown",
    "assumption_check",
    "clique_bound",
    "directed_bound",
    "expected_bound_mc",
    "indep_bound",
    "random_bound",
    "spread_integral",
    "weighted_bound",
]
