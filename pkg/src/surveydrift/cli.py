"""Command-line entry point ``surveydrift``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import bounds as bd
from .dist import parse_distribution
from .dynamics import build_interaction_matrix, init_beliefs, update_beliefs
from .graph import graph_stats, induced_subgraph
from .harness import (
    ExperimentConfig,
    bound_sweep,
    build_graph,
    ks_compare,
    load_config,
    read_column,
    run_experiment,
    sweep_csv,
    write_boxplot_svg,
    write_sweep_svg,
)
from .netgen import load_edge_list, write_edge_list
from .ot import w1_empirical_cdf
from .rng import derive_seed
from .sampling import Strategy, cluster_sample, independent_set_sample, random_sample


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", default="er", choices=["er", "sf", "edgelist", "empty", "cliques"])
    p.add_argument("--edges", help="edge-list file (implies --graph edgelist)")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--p", type=float, default=0.045)
    p.add_argument("--exponent", type=float, default=2.5)
    p.add_argument("--mean-degree", type=float, default=1.0)
    p.add_argument("--clique-size", type=int, default=5)
    p.add_argument("--clique-count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)


def _graph_from_args(a):
    graph = "edgelist" if a.edges else a.graph
    cfg = ExperimentConfig(graph=graph, n=a.n, p=a.p, exponent=a.exponent, mean_degree=a.mean_degree,
                           path=a.edges, directed=a.directed, clique_size=a.clique_size,
                           clique_count=a.clique_count, replications=1)
    return build_graph(cfg, a.seed)


def _sample(g, strategy: Strategy, budget: int, seed: int):
    if strategy is Strategy.INDEPENDENT_SET:
        return independent_set_sample(g, budget, seed)
    if strategy is Strategy.CLUSTER:
        return cluster_sample(g, budget, seed)
    return random_sample(g, budget, seed)


def cmd_generate(a) -> int:
    g = _graph_from_args(a)
    write_edge_list(g, a.out)
    print(f"wrote {g.n_vertices} vertices, {g.edge_count} edges to {a.out}")
    return 0


def cmd_sample(a) -> int:
    g = _graph_from_args(a)
    s = _sample(g, Strategy(a.strategy), a.budget, a.sample_seed)
    print(" ".join(map(str, s.respondent_ids.tolist())))
    print(f"# {s.size} respondents, {s.subgraph.edge_count} edges in the subgraph", file=sys.stderr)
    return 0


def cmd_simulate(a) -> int:
    g = _graph_from_args(a)
    d = parse_distribution(a.belief)
    s = _sample(g, Strategy(a.strategy), a.budget, derive_seed(a.sample_seed, 0))
    w = build_interaction_matrix(s.subgraph, a.rule, seed=derive_seed(a.sample_seed, 1), self_weight=a.self_weight)
    x0 = init_beliefs(d, s.size, derive_seed(a.sample_seed, 2))
    x1 = update_beliefs(w, x0)
    print("respondent,before,after")
    for v, b, c in zip(s.respondent_ids.tolist(), x0, x1):
        print(f"{v},{b:.6f},{c:.6f}")
    print(f"# W1 to {d}: before {w1_empirical_cdf(x0, d):.6f}, after {w1_empirical_cdf(x1, d):.6f}", file=sys.stderr)
    return 0


def cmd_bound(a) -> int:
    d = parse_distribution(a.belief)
    if a.kind == "indep":
        print(json.dumps({"total": bd.indep_bound(d, a.size)}))
        return 0
    if a.kind == "clique":
        res = bd.clique_bound(d, a.cliques, a.clique_size)
    else:
        g = load_edge_list(a.edges, directed=a.kind == "directed")
        if a.vertices:
            g = induced_subgraph(g, [int(v) for v in a.vertices.split(",")]).graph
        if a.kind == "random":
            res = bd.random_bound(g, d)
        elif a.kind == "directed":
            res = bd.directed_bound(g, d)
        else:
            w = build_interaction_matrix(g, "weighted", seed=a.seed)
            res = bd.weighted_bound(g, w, d)
    print(json.dumps({"total": res.total, "terms": res.terms, "note": res.note}, indent=2))
    return 0


def cmd_experiment(a) -> int:
    cfg, axis, values = load_config(a.config)
    if axis:
        pts = bound_sweep(cfg.belief, axis, values, cfg.replications, cfg.master_seed)
        text = sweep_csv(pts)
        if a.out:
            import os

            os.makedirs(a.out, exist_ok=True)
            with open(os.path.join(a.out, "sweep.csv"), "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            if a.svg:
                write_sweep_svg(pts, os.path.join(a.out, "sweep.svg"))
        print(text, end="")
        return 0
    res = run_experiment(cfg)
    if a.out:
        raw, summ = res.write(a.out)
        print(f"# wrote {raw} and {summ}", file=sys.stderr)
        if a.svg:
            import os

            write_boxplot_svg(res, os.path.join(a.out, "boxplot.svg"))
    print(res.summary_csv(), end="")
    print(f"# average independent-set size {res.avg_independent_set_size:.2f}; "
          f"average clusters selected {res.avg_clusters_selected:.2f}", file=sys.stderr)
    return 0


def cmd_ks(a) -> int:
    x = read_column(a.csv, a.a)
    y = read_column(a.csv_b or a.csv, a.b)
    r = ks_compare(x, y)
    star = "**" if r.significant_1pct else ("*" if r.significant_5pct else "")
    print(f"D={r.d_stat:.4f} p={r.p_value:.4g} {star}".rstrip())
    return 0


def cmd_stats(a) -> int:
    g = _graph_from_args(a)
    s = graph_stats(g)
    print(json.dumps({"vertices": g.n_vertices, "edges": g.edge_count, **s._asdict()}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="surveydrift", description="Survey sampling under opinion dynamics.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a generated graph as an edge list")
    _add_graph_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    for name, fn, hlp in (("sample", cmd_sample, "draw one respondent sample"),
                          ("simulate", cmd_simulate, "one replication; beliefs before and after")):
        p = sub.add_parser(name, help=hlp)
        _add_graph_args(p)
        p.add_argument("--strategy", default="random", choices=[s.value for s in Strategy])
        p.add_argument("--budget", type=int, default=50)
        p.add_argument("--sample-seed", type=int, default=0)
        if name == "simulate":
            p.add_argument("--belief", default="beta(2,2)")
            p.add_argument("--rule", default="average", choices=["average", "weighted"])
            p.add_argument("--self-weight", default="drawn", choices=["drawn", "zero"])
        p.set_defaults(func=fn)

    p = sub.add_parser("bound", help="evaluate a bound")
    p.add_argument("kind", choices=["indep", "clique", "random", "directed", "weighted"])
    p.add_argument("--belief", default="beta(2,2)")
    p.add_argument("--size", type=int, default=50, help="sample size for indep")
    p.add_argument("--cliques", type=int, default=10)
    p.add_argument("--clique-size", type=int, default=5)
    p.add_argument("--edges", help="subgraph edge list for random/directed/weighted")
    p.add_argument("--vertices", help="comma-separated vertex ids to induce on")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("experiment", help="run an experiment from a config file")
    p.add_argument("config")
    p.add_argument("--out")
    p.add_argument("--svg", action="store_true", help="also write SVG charts (needs matplotlib)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("ks", help="two-sample K-S test between result columns")
    p.add_argument("csv")
    p.add_argument("a", help="strategy of the first column")
    p.add_argument("b", help="strategy of the second column")
    p.add_argument("--csv-b", help="second results file (defaults to the first)")
    p.set_defaults(func=cmd_ks)

    p = sub.add_parser("stats", help="descriptive graph statistics")
    _add_graph_args(p)
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    np.seterr(all="ignore")
    if a.command == "bound" and a.kind in ("random", "directed", "weighted") and not a.edges:
        print("error: --edges is required for this bound", file=sys.stderr)
        return 2
    try:
        return a.func(a)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
