"""Radius-based result diversification over a metric-tree index.

Pick a radius r; the engine selects a subset where every object has a
selected representative within r (coverage) while selected objects stay
more than r apart (dissimilarity). Zoom operations adapt an existing
selection to a new radius instead of recomputing it from scratch.
"""

from .baselines import (QualityReport, check_maxmin_ratio, greedy_maxmin,
                        greedy_maxsum, jaccard_distance, k_medoids, quality)
from .data import gen_clustered, gen_uniform, load_csv, save_csv
from .disc import (DiverseSubset, basic_disc, fast_c, greedy_c, greedy_disc,
                   verify)
from .metrics import (EUCLIDEAN, HAMMING, MANHATTAN, Dataset, Metric, Point,
                      annulus_independence_bound, categorical_point, distance,
                      get_metric, independence_bound, numeric_point)
from .mtree import MIN_OVERLAP, AccessCounter, MTree, MTreeConfig, SplitPolicy, build
from .zoom import local_zoom, maintain_closest_black, zoom_diff, zoom_in, zoom_out

__version__ = "0.1.0"

__all__ = [
    "AccessCounter", "Dataset", "DiverseSubset", "EUCLIDEAN", "HAMMING",
    "MANHATTAN", "MIN_OVERLAP", "MTree", "MTreeConfig", "Metric", "Point",
    "QualityReport", "SplitPolicy", "annulus_independence_bound", "basic_disc",
    "build", "categorical_point", "check_maxmin_ratio", "distance", "fast_c",
    "gen_clustered", "gen_uniform", "get_metric", "greedy_c", "greedy_disc",
    "greedy_maxmin", "greedy_maxsum", "independence_bound", "jaccard_distance",
    "k_medoids", "load_csv", "local_zoom", "maintain_closest_black",
    "numeric_point", "quality", "save_csv", "verify", "zoom_diff", "zoom_in",
    "zoom_out",
]
