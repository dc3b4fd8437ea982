"""Last passage percolation on the complete graph K_n."""

from .errors import ConfigError, PreconditionError
from .graph import EdgeWeights, SimpleGraph, sample_gnp, sample_weights, threshold_subgraph
from .paths import Path, passage_time, surgery
from .weights import Exponential, Pareto, TwoPoint, Uniform, parse_dist

__version__ = "0.1.0"
