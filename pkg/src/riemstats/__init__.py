"""Riemannian statistics on data tables with a UMAP-style local metric.

Modules
-------
data          tables, configuration, CSV input/output
neighbors     exact Euclidean kNN
local_metric  local scales, fuzzy memberships, all-pairs distances
embedding     2-D layout by cross-entropy minimization
stats         Fréchet medoid, covariance, correlation, correlation circle
topology      Čech complexes, single linkage, Betti numbers
pipeline      the full run
cli           command-line entry point
"""

__version__ = "0.1.0"

from .data import DataTable, InputError, PipelineConfig, emit_csv, load_csv, load_students, standardize
from .embedding import CurveParams, Embedding, cross_entropy, fit_curve, optimize_layout, spectral_init
from .local_metric import (
    DisconnectedGraphError,
    DistanceMatrix,
    FuzzyGraph,
    LocalScales,
    compute_local_scales,
    fuzzy_memberships,
    umap_distance_matrix,
)
from .neighbors import NeighborLists, exact_knn
from .pipeline import RunResult, run
from .stats import (
    CorrelationCircle,
    DegenerateVarianceError,
    FrechetMean,
    RiemannianCovariance,
    correlation_circle,
    correlation_matrix,
    covariance,
    frechet_mean,
    pearson_correlation_matrix,
    rho_factor,
    riemannian_correlation,
    riemannian_subtract,
)
from .topology import betti_numbers, cech_complex, nerve_consistency_check, single_linkage_components
