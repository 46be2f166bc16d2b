"""Initial-belief laws and their sample-mean laws.

``Beta`` and ``Normal`` are analytic laws; ``EmpiricalDistribution`` is a sorted
sample (an ecdf). All three expose the same small surface -- ``cdf``,
``quantile``, ``mean``, ``sd`` -- so distance and bound code can take any of
them where a "cdf-like" object is expected.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from . import special
from .rng import make_rng

DEFAULT_MC_DRAWS = 1_000_000


@dataclass(frozen=True)
class Beta:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"Beta parameters must be positive, got ({self.a}, {self.b})")

    family = "beta"

    @property
    def mean(self) -> float:
        return self.a / (self.a + self.b)

    @property
    def sd(self) -> float:
        s = self.a + self.b
        return math.sqrt(self.a * self.b / (s * s * (s + 1.0)))

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, 1.0

    def cdf(self, t):
        return special.betainc(self.a, self.b, t)

    def pdf(self, t):
        return special.beta_pdf(self.a, self.b, t)

    def partial_expectation(self, t):
        """E[X; X <= t], the antiderivative of the quantile function at cdf(t)."""
        return self.mean * special.betainc(self.a + 1.0, self.b, t)

    def quantile(self, q):
        q = _check_prob(q)
        lo, hi = np.zeros_like(q), np.ones_like(q)
        x = np.clip(np.full_like(q, self.mean), 1e-12, 1 - 1e-12)
        # coarse bisection first so Newton starts inside the basin
        for _ in range(8):
            below = self.cdf(x) < q
            lo = np.where(below, x, lo)
            hi = np.where(below, hi, x)
            x = 0.5 * (lo + hi)
        return _newton(self.cdf, self.pdf, q, x, lo, hi)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.beta(self.a, self.b, size=n)

    def __str__(self) -> str:
        return f"Beta({self.a:g},{self.b:g})"


@dataclass(frozen=True)
class Normal:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"Normal sigma must be positive, got {self.sigma}")

    family = "normal"

    @property
    def mean(self) -> float:
        return self.mu

    @property
    def sd(self) -> float:
        return self.sigma

    @property
    def support(self) -> tuple[float, float]:
        return self.mu - 12.0 * self.sigma, self.mu + 12.0 * self.sigma

    def cdf(self, t):
        return special.norm_cdf((np.asarray(t, dtype=np.float64) - self.mu) / self.sigma)

    def pdf(self, t):
        return special.norm_pdf((np.asarray(t, dtype=np.float64) - self.mu) / self.sigma) / self.sigma

    def partial_expectation(self, t):
        z = (np.asarray(t, dtype=np.float64) - self.mu) / self.sigma
        return self.mu * special.norm_cdf(z) - self.sigma * special.norm_pdf(z)

    def quantile(self, q):
        q = _check_prob(q)
        z = special.norm_ppf_guess(q)
        for _ in range(3):
            # Halley step on Phi(z) - q
            err = special.norm_cdf(z) - q
            u = err / special.norm_pdf(z)
            z = z - u / (1.0 + 0.5 * z * u)
        return self.mu + self.sigma * z

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.normal(self.mu, self.sigma, size=n)

    def __str__(self) -> str:
        return f"Normal({self.mu:g},{self.sigma:g})"


DistributionSpec = Union[Beta, Normal]


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Sorted sample viewed as a discrete law with equal atoms."""

    sorted_values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.sorted_values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("empirical distribution needs a 1-D sample")
        if not np.all(np.isfinite(v)):
            raise ValueError("empirical distribution values must be finite")
        if len(v) > 1 and np.any(np.diff(v) < 0):
            v = np.sort(v)
        v.setflags(write=False)
        object.__setattr__(self, "sorted_values", v)

    @classmethod
    def from_sample(cls, values) -> EmpiricalDistribution:
        return cls(np.sort(np.asarray(values, dtype=np.float64)))

    def __len__(self) -> int:
        return len(self.sorted_values)

    @property
    def mean(self) -> float:
        return float(self.sorted_values.mean())

    @property
    def sd(self) -> float:
        return float(self.sorted_values.std())

    @property
    def support(self) -> tuple[float, float]:
        return float(self.sorted_values[0]), float(self.sorted_values[-1])

    def cdf(self, t):
        t = np.asarray(t, dtype=np.float64)
        return np.searchsorted(self.sorted_values, t, side="right") / len(self.sorted_values)

    def quantile(self, q):
        q = _check_prob(q, closed=True)
        m = len(self.sorted_values)
        idx = np.clip(np.ceil(q * m).astype(np.int64) - 1, 0, m - 1)
        return self.sorted_values[idx]


CdfLike = Union[Beta, Normal, EmpiricalDistribution]


def _check_prob(q, closed: bool = False) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    bad = (q < 0) | (q > 1) if closed else (q <= 0) | (q >= 1)
    if np.any(bad) or np.any(np.isnan(q)):
        raise ValueError("quantile level must lie strictly inside (0, 1)")
    return q


def _newton(cdf, pdf, q, x, lo, hi, tol=1e-14, max_iter=100):
    for _ in range(max_iter):
        f = cdf(x) - q
        if np.all(np.abs(f) <= tol):
            break
        lo = np.where(f < 0, x, lo)
        hi = np.where(f > 0, x, hi)
        dens = pdf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = x - f / dens
        ok = np.isfinite(step) & (step > lo) & (step < hi)
        x = np.where(ok, step, 0.5 * (lo + hi))
        if np.all(hi - lo <= 1e-16):
            break
    return x


def cdf(d: CdfLike, t):
    return d.cdf(t)


def quantile(d: CdfLike, q):
    return d.quantile(q)


def sample_mean_distribution(
    d: DistributionSpec, r: int, m: int = DEFAULT_MC_DRAWS, seed: int = 0
) -> CdfLike:
    """Law of the mean of ``r`` i.i.d. draws from ``d``.

    Normal laws are closed under averaging, so ``Normal(mu, sigma/sqrt(r))`` is
    returned exactly. Otherwise the law is represented by ``m`` sorted Monte
    Carlo realisations.
    """
    if r < 1 or m < 1:
        raise ValueError("r and m must be positive")
    if isinstance(d, Normal):
        return Normal(d.mu, d.sigma / math.sqrt(r))
    return _mc_sample_mean(d, int(r), int(m), int(seed))


@lru_cache(maxsize=24)
def _mc_sample_mean(d: DistributionSpec, r: int, m: int, seed: int) -> EmpiricalDistribution:
    rng = make_rng(seed)
    total = np.zeros(m)
    for _ in range(r):
        total += d.sample(rng, m)
    total /= r
    total.sort()
    return EmpiricalDistribution(total)


_DIST_RE = re.compile(r"^\s*(beta|normal|norm|n)\s*\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)\s*$", re.I)


def parse_distribution(text: str) -> DistributionSpec:
    """Parse ``beta(2,2)`` or ``normal(0,1)`` (case-insensitive)."""
    m = _DIST_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse distribution {text!r}; use beta(a,b) or normal(mu,sigma)")
    name, p1, p2 = m.group(1).lower(), float(m.group(2)), float(m.group(3))
    return Beta(p1, p2) if name == "beta" else Normal(p1, p2)
