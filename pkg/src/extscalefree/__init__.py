"""Extended scale-free degree laws: distributions, fitting, random graphs and
sub-network analysis."""

from .distributions import (
    DegreeDistribution,
    DEpd,
    DGpd,
    DPareto,
    Mixture,
    Shifted,
    Zipf,
    ccdf,
    cdf,
    mean,
    pgf,
    pmf,
    point_mass,
    quantile,
    sample,
)
from .estimation import FitResult, fit, fit_chisq, fit_mle_discrete, hill, hill_plot
from .graph import Graph
from .netgen import configuration_model, erdos_gallai_check, generate, sample_degree_sequence
from .netops import (
    average_shortest_path,
    largest_connected_component,
    node_subsample,
    subsampled_pgf,
    subsampled_pmf,
)
from .special import hurwitz_zeta, polylog, zeta

__version__ = "0.1.0"
