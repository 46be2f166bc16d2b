"""Survey sampling on social networks with one round of opinion exchange."""

from .bounds import (
    assumption_check,
    clique_bound,
    directed_bound,
    expected_bound_mc,
    indep_bound,
    random_bound,
    weighted_bound,
)
from .dist import Beta, EmpiricalDistribution, Normal, parse_distribution, sample_mean_distribution
from .dynamics import InteractionMatrix, Rule, build_interaction_matrix, init_beliefs, update_beliefs
from .graph import Graph, graph_stats, induced_subgraph, long_range_pair_count
from .harness import ExperimentConfig, ExperimentResult, bound_sweep, ks_compare, run_experiment, run_grid
from .netgen import disjoint_cliques, erdos_renyi, load_edge_list, scale_free_static
from .ot import ks_two_sample, qq_pearson, w1_empirical_cdf, w1_empirical_empirical, w2_gaussian
from .sampling import SampleDesign, Strategy, cluster_sample, detect_communities, independent_set_sample, random_sample

__version__ = "0.1.0"
