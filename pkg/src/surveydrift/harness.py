"""Monte Carlo experiments: sample, update once, measure W1, summarise.

Replication ``k`` runs under the seed ``derive_seed(master_seed, k)``; every
random stream inside it (graph, samples, beliefs, weights, communities) is a
further child of that seed, keyed by purpose and strategy. Beliefs and
samples therefore do not depend on the interaction rule, and replications can
run in any order or in parallel without changing any number.

The worker count is read from ``SURVEYDRIFT_WORKERS`` (default 1).
"""

from __future__ import annotations

import configparser
import csv
import enum
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import bounds as bd
from . import rng as streams
from .dist import DistributionSpec, Normal, parse_distribution, sample_mean_distribution
from .dynamics import Rule, SelfWeight, build_interaction_matrix, init_beliefs, update_beliefs
from .graph import Graph
from .netgen import disjoint_cliques, erdos_renyi, load_edge_list, scale_free_static
from .ot import ks_two_sample, qq_pearson, w1_empirical_cdf, w1_empirical_empirical
from .sampling import (
    SampleDesign,
    Strategy,
    cluster_sample,
    detect_communities,
    independent_set_sample,
    random_sample,
)

log = logging.getLogger(__name__)

WORKERS_ENV = "SURVEYDRIFT_WORKERS"
STRATEGY_KEYS = {
    Strategy.INDEPENDENT_SET: streams.INDEPENDENT,
    Strategy.CLUSTER: streams.CLUSTER,
    Strategy.RANDOM: streams.RANDOM,
}
CSV_HEADER = ["strategy", "replication", "seed", "sample_size", "w1"]
SUMMARY_HEADER = ["strategy", "mean", "sd", "q1", "median", "q3", "lo_whisker", "hi_whisker", "bound"]


class ConfigError(ValueError):
    pass


class W1Target(str, enum.Enum):
    ANALYTIC = "analytic"
    INITIAL = "initial"


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment. ``graph`` is one of er, sf, edgelist, empty, cliques."""

    graph: str = "er"
    n: int = 500
    p: float = 0.045
    exponent: float = 2.5
    mean_degree: float = 1.0
    path: Optional[str] = None
    directed: bool = False
    clique_size: int = 5
    clique_count: int = 100
    strategies: tuple = (Strategy.INDEPENDENT_SET, Strategy.RANDOM, Strategy.CLUSTER)
    budget_fraction: float = 0.10
    budget: Optional[int] = None
    belief: DistributionSpec = field(default_factory=lambda: parse_distribution("beta(2,2)"))
    rule: Rule = Rule.AVERAGE
    self_weight: SelfWeight = SelfWeight.DRAWN
    w1_target: W1Target = W1Target.ANALYTIC
    replications: int = 500
    master_seed: int = 0
    independent_set_cap: Optional[int] = None
    fixed_graph: bool = False
    iterations: int = 1
    isolate_clusters: bool = False
    bound_reps: int = 20

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError("replications must be at least 1")
        if not 0.0 < self.budget_fraction <= 1.0:
            raise ConfigError("budget_fraction must lie in (0, 1]")
        if self.graph not in ("er", "sf", "edgelist", "empty", "cliques"):
            raise ConfigError(f"unknown graph source {self.graph!r}")
        if self.graph == "edgelist" and not self.path:
            raise ConfigError("graph = edgelist needs a path")
        if self.iterations < 1:
            raise ConfigError("iterations must be at least 1")
        object.__setattr__(self, "strategies", tuple(Strategy(s) for s in self.strategies))
        object.__setattr__(self, "rule", Rule(self.rule))
        object.__setattr__(self, "self_weight", SelfWeight(self.self_weight))
        object.__setattr__(self, "w1_target", W1Target(self.w1_target))

    @property
    def regenerates_graph(self) -> bool:
        return self.graph in ("er", "sf") and not self.fixed_graph

    def budget_for(self, n_vertices: int) -> int:
        b = self.budget if self.budget is not None else int(round(self.budget_fraction * n_vertices))
        if not 1 <= b <= n_vertices:
            raise ConfigError(f"budget {b} does not fit a population of {n_vertices}")
        return b

    def cap_for(self, n_vertices: int) -> int:
        return self.independent_set_cap if self.independent_set_cap is not None else self.budget_for(n_vertices)


def build_graph(cfg: ExperimentConfig, seed: int) -> Graph:
    if cfg.graph == "er":
        return erdos_renyi(cfg.n, cfg.p, seed)
    if cfg.graph == "sf":
        return scale_free_static(cfg.n, cfg.exponent, cfg.mean_degree, seed)
    if cfg.graph == "edgelist":
        return load_edge_list(cfg.path, cfg.directed)
    if cfg.graph == "empty":
        return Graph.empty(cfg.n)
    return disjoint_cliques(cfg.clique_count, cfg.clique_size)


@dataclass(frozen=True)
class Summary:
    mean: float
    sd: float
    q1: float
    median: float
    q3: float
    lo_whisker: float
    hi_whisker: float
    bound: float

    @classmethod
    def of(cls, values: np.ndarray, bound: float = math.nan) -> Summary:
        v = np.asarray(values, dtype=np.float64)
        q1, med, q3 = np.percentile(v, [25, 50, 75])
        iqr = q3 - q1
        inside = v[(v >= q1 - 1.5 * iqr) & (v <= q3 + 1.5 * iqr)]
        sd = float(v.std(ddof=1)) if len(v) > 1 else 0.0
        return cls(float(v.mean()), sd, float(q1), float(med), float(q3),
                   float(inside.min()), float(inside.max()), float(bound))


@dataclass(frozen=True)
class KsComparison:
    d_stat: float
    p_value: float
    significant_1pct: bool
    significant_5pct: bool


def ks_compare(a, b) -> KsComparison:
    """Two-sample K-S test of two result columns, flagged at 5% and 1%."""
    d, p = ks_two_sample(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))
    return KsComparison(d, p, p < 0.01, p < 0.05)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    seeds: np.ndarray
    w1: dict  # strategy -> per-replication W1
    sample_sizes: dict  # strategy -> per-replication sample size
    bounds: dict  # strategy -> mean bound over the first bound_reps replications
    clusters_selected: Optional[np.ndarray] = None

    def summary(self) -> dict:
        return {s: Summary.of(self.w1[s], self.bounds.get(s, math.nan)) for s in self.w1}

    @property
    def avg_independent_set_size(self) -> float:
        sizes = self.sample_sizes.get(Strategy.INDEPENDENT_SET)
        return float(np.mean(sizes)) if sizes is not None else math.nan

    @property
    def avg_clusters_selected(self) -> float:
        return float(np.mean(self.clusters_selected)) if self.clusters_selected is not None else math.nan

    def ks_pairs(self) -> dict:
        keys = list(self.w1)
        return {(a, b): ks_compare(self.w1[a], self.w1[b]) for i, a in enumerate(keys) for b in keys[i + 1:]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for k in range(len(self.seeds)):
            for s in self.w1:
                w.writerow([s.value, k, int(self.seeds[k]), int(self.sample_sizes[s][k]), repr(float(self.w1[s][k]))])
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for s, row in self.summary().items():
            w.writerow([s.value] + [f"{getattr(row, h):.6g}" for h in SUMMARY_HEADER[1:]])
        return buf.getvalue()

    def write(self, directory: str, stem: str = "results") -> tuple[str, str]:
        os.makedirs(directory, exist_ok=True)
        raw = os.path.join(directory, f"{stem}.csv")
        summ = os.path.join(directory, f"{stem}_summary.csv")
        with open(raw, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())
        with open(summ, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.summary_csv())
        return raw, summ


def read_column(path: str, strategy: str) -> np.ndarray:
    """The ``w1`` column of one strategy from a results CSV."""
    with open(path, encoding="utf-8") as fh:
        vals = [float(r["w1"]) for r in csv.DictReader(fh) if r["strategy"] == strategy]
    if not vals:
        raise ValueError(f"no rows for strategy {strategy!r} in {path}")
    return np.array(vals)


# --- replication kernel -----------------------------------------------------


def _draw_design(cfg: ExperimentConfig, g: Graph, s: Strategy, seed: int, labels) -> SampleDesign:
    if s is Strategy.INDEPENDENT_SET:
        return independent_set_sample(g, cfg.cap_for(g.n_vertices), seed)
    if s is Strategy.CLUSTER:
        return cluster_sample(g, cfg.budget_for(g.n_vertices), seed, labels=labels,
                              isolate_clusters=cfg.isolate_clusters)
    return random_sample(g, cfg.budget_for(g.n_vertices), seed)


def _bound_for(s: Strategy, design: SampleDesign, w, d: DistributionSpec, rule: Rule) -> float:
    if s is Strategy.INDEPENDENT_SET:
        return bd.indep_bound(d, design.size)
    if rule is Rule.WEIGHTED:
        return bd.weighted_bound(design.subgraph, w, d).total
    if design.subgraph.directed:
        return bd.directed_bound(design.subgraph, d).total
    return bd.random_bound(design.subgraph, d).total


def _replicate(cfg: ExperimentConfig, k: int, families, rules, fixed) -> dict:
    """Run replication ``k`` for every (family, rule) combination."""
    rep_seed = streams.derive_seed(cfg.master_seed, k)
    if fixed is not None:
        g, labels = fixed
    else:
        g = build_graph(cfg, streams.derive_seed(rep_seed, streams.GRAPH))
        labels = None
        if Strategy.CLUSTER in cfg.strategies:
            labels = detect_communities(g, streams.derive_seed(rep_seed, streams.COMMUNITIES))
    out = {}
    for s in cfg.strategies:
        key = STRATEGY_KEYS[s]
        design = _draw_design(cfg, g, s, streams.derive_seed(rep_seed, key), labels)
        matrices = {}
        for rule in rules:
            matrices[rule] = build_interaction_matrix(
                design.subgraph, rule, seed=streams.derive_seed(rep_seed, streams.WEIGHTS, key),
                self_weight=cfg.self_weight)
        for fi, d in enumerate(families):
            x0 = init_beliefs(d, design.size, streams.derive_seed(rep_seed, streams.BELIEFS, key))
            for rule in rules:
                x1 = update_beliefs(matrices[rule], x0, cfg.iterations)
                if cfg.w1_target is W1Target.ANALYTIC:
                    w1 = w1_empirical_cdf(x1, d)
                else:
                    w1 = w1_empirical_empirical(x1, x0)
                bound = math.nan
                if k < cfg.bound_reps:
                    bound = _bound_for(s, design, matrices[rule], d, rule)
                out[(fi, rule, s)] = (w1, design.size, design.clusters_selected, bound)
    return out


def _fixed_population(cfg: ExperimentConfig):
    if cfg.regenerates_graph:
        return None
    g = build_graph(cfg, streams.derive_seed(cfg.master_seed, streams.GRAPH))
    labels = None
    if Strategy.CLUSTER in cfg.strategies:
        labels = detect_communities(g, streams.derive_seed(cfg.master_seed, streams.COMMUNITIES))
    return g, labels


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def _replicate_batch(args):
    cfg, ks, families, rules, fixed = args
    return [(k, _replicate(cfg, k, families, rules, fixed)) for k in ks]


def run_grid(
    cfg: ExperimentConfig,
    families: Sequence[DistributionSpec],
    rules: Sequence[Rule | str],
) -> dict:
    """Run ``cfg`` for every belief family and rule on shared graphs and samples.

    Returns ``{(family, rule): ExperimentResult}``; each entry equals what
    ``run_experiment`` gives for that single combination.
    """
    families = list(families)
    rules = [Rule(r) for r in rules]
    fixed = _fixed_population(cfg)
    if fixed is not None:
        cfg.budget_for(fixed[0].n_vertices)
    reps = list(range(cfg.replications))
    workers = _worker_count()
    if workers > 1 and len(reps) > 1:
        chunks = [reps[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_replicate_batch, [(cfg, c, families, rules, fixed) for c in chunks])
            records = dict(item for part in parts for item in part)
    else:
        records = dict(_replicate_batch((cfg, reps, families, rules, fixed)))
    seeds = np.array([streams.derive_seed(cfg.master_seed, k) for k in reps], dtype=np.uint64)
    results = {}
    for fi, d in enumerate(families):
        for rule in rules:
            w1, sizes, bnds = {}, {}, {}
            clusters = None
            for s in cfg.strategies:
                rows = [records[k][(fi, rule, s)] for k in reps]
                w1[s] = np.array([r[0] for r in rows])
                sizes[s] = np.array([r[1] for r in rows], dtype=np.int64)
                b = [r[3] for r in rows if not math.isnan(r[3])]
                bnds[s] = float(np.mean(b)) if b else math.nan
                if s is Strategy.CLUSTER:
                    clusters = np.array([r[2] for r in rows], dtype=np.int64)
            results[(d, rule)] = ExperimentResult(replace(cfg, belief=d, rule=rule), seeds, w1, sizes, bnds, clusters)
    return results


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return run_grid(cfg, [cfg.belief], [cfg.rule])[(cfg.belief, cfg.rule)]


# --- bound sweeps -------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    axis: str
    value: int
    empirical_mean: float
    stderr: float
    bound: float


def bound_sweep(
    d: DistributionSpec,
    axis: str,
    values: Sequence[int],
    replications: int = 500,
    master_seed: int = 0,
    sample_size: int = 200,
) -> list[SweepPoint]:
    """Empirical mean W1 next to its bound along one axis.

    ``axis="n"``: independent-set samples of each size ``n`` from an edgeless
    population; bound = ``indep_bound``. ``axis="r"``: cluster samples of
    ``sample_size`` respondents from a population of disjoint ``r``-cliques
    (five times as many cliques as the sample needs); bound = ``clique_bound``.
    """
    points = []
    for v in values:
        v = int(v)
        if axis == "n":
            g = Graph.empty(v)
            labels = None
            bound = bd.indep_bound(d, v)
        elif axis == "r":
            if sample_size % v:
                raise ConfigError(f"clique size {v} does not divide the sample size {sample_size}")
            p = sample_size // v
            g = disjoint_cliques(5 * p, v)
            labels = detect_communities(g, streams.derive_seed(master_seed, streams.COMMUNITIES, v))
            bound = bd.clique_bound(d, p, v).total
        else:
            raise ConfigError(f"unknown sweep axis {axis!r}; use n or r")
        vals = np.empty(replications)
        for k in range(replications):
            rep_seed = streams.derive_seed(master_seed, k, v)
            if axis == "n":
                design = independent_set_sample(g, v, streams.derive_seed(rep_seed, streams.INDEPENDENT))
            else:
                design = cluster_sample(g, sample_size, streams.derive_seed(rep_seed, streams.CLUSTER), labels=labels)
            x0 = init_beliefs(d, design.size, streams.derive_seed(rep_seed, streams.BELIEFS))
            x1 = update_beliefs(build_interaction_matrix(design.subgraph), x0)
            vals[k] = w1_empirical_cdf(x1, d)
        se = float(vals.std(ddof=1) / math.sqrt(replications)) if replications > 1 else 0.0
        points.append(SweepPoint(axis, v, float(vals.mean()), se, float(bound)))
    return points


def sweep_csv(points: Sequence[SweepPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["axis", "value", "empirical_mean", "stderr", "bound"])
    for pt in points:
        w.writerow([pt.axis, pt.value, repr(pt.empirical_mean), repr(pt.stderr), repr(pt.bound)])
    return buf.getvalue()


def rho_grid_sensitivity(d: DistributionSpec, r: int = 1, grids=(100, 1000, 10000)) -> dict:
    """q-q correlation of the ``r``-sample-mean law against its Gaussian surrogate per grid size."""
    law = d if r == 1 else sample_mean_distribution(d, r)
    ref = Normal(d.mean, d.sd / math.sqrt(r))
    return {g: qq_pearson(law, ref, g) for g in grids}


# --- config files ---------------------------------------------------------------

_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _as_bool(text: str) -> bool:
    try:
        return _BOOL[text.strip().lower()]
    except KeyError:
        raise ConfigError(f"expected a boolean, got {text!r}") from None


def parse_config(text: str) -> tuple[ExperimentConfig, Optional[str], list[int]]:
    """Parse an ``[experiment]`` INI section.

    Returns the config plus the optional sweep axis and its values.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read_string(text)
    if not cp.has_section("experiment"):
        raise ConfigError("config needs an [experiment] section")
    sec = dict(cp.items("experiment"))
    kw = {}
    conv = {
        "graph": str, "n": int, "p": float, "exponent": float, "mean_degree": float, "path": str,
        "directed": _as_bool, "clique_size": int, "clique_count": int, "budget_fraction": float,
        "budget": int, "rule": str, "self_weight": str, "w1_target": str, "replications": int,
        "master_seed": int, "independent_set_cap": int, "fixed_graph": _as_bool, "iterations": int,
        "isolate_clusters": _as_bool, "bound_reps": int,
    }
    sweep_axis = sec.pop("sweep_axis", None)
    sweep_values = [int(v) for v in sec.pop("sweep_values", "").replace(",", " ").split()]
    for key, raw in sec.items():
        if key == "strategies":
            kw[key] = tuple(Strategy(s.strip()) for s in raw.split(",") if s.strip())
        elif key == "belief":
            kw[key] = parse_distribution(raw)
        elif key in conv:
            try:
                kw[key] = conv[key](raw.strip())
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {raw!r}") from exc
        else:
            raise ConfigError(f"unknown config key {key!r}")
    try:
        return ExperimentConfig(**kw), sweep_axis, sweep_values
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> tuple[ExperimentConfig, Optional[str], list[int]]:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# --- optional charts ---------------------------------------------------------------


def write_boxplot_svg(result: ExperimentResult, path: str) -> None:
    """Box chart of the W1 columns (needs matplotlib)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    names = [s.value for s in result.w1]
    ax.boxplot([result.w1[s] for s in result.w1], whis=1.5)
    ax.set_xticks(range(1, len(names) + 1), names)
    ax.set_ylabel("W1")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def write_sweep_svg(points: Sequence[SweepPoint], path: str) -> None:
    """Empirical mean and bound curves of a sweep (needs matplotlib)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    x = [pt.value for pt in points]
    ax.plot(x, [pt.empirical_mean for pt in points], "o-", label="empirical mean W1")
    ax.plot(x, [pt.bound for pt in points], "s--", label="bound")
    ax.set_xlabel(points[0].axis if points else "")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
