"""End-to-end run: table -> kNN -> fuzzy graph -> distances -> layout -> statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DataTable, PipelineConfig, standardize
from .embedding import CurveParams, Embedding, embed, fit_curve
from .local_metric import (
    DistanceMatrix,
    FuzzyGraph,
    LocalScales,
    compute_local_scales,
    fuzzy_memberships,
    umap_distance_matrix,
)
from .neighbors import NeighborLists, exact_knn
from .stats import (
    CorrelationCircle,
    FrechetMean,
    RiemannianCovariance,
    correlation_circle,
    correlation_matrix,
    covariance,
    frechet_mean,
    pearson_circle,
)


@dataclass(frozen=True)
class RunResult:
    config: PipelineConfig
    table: DataTable
    neighbors: NeighborLists
    scales: LocalScales
    graph: FuzzyGraph
    distances: DistanceMatrix
    curve: CurveParams
    embedding: Embedding
    mean: FrechetMean
    cov: RiemannianCovariance
    R: np.ndarray
    circle: CorrelationCircle
    pearson: np.ndarray | None = None


def build_graph(table: DataTable, config: PipelineConfig):
    config.check_against(table)
    nbrs = exact_knn(table, config.k)
    scales = compute_local_scales(nbrs, config.k)
    graph = fuzzy_memberships(nbrs, scales)
    return nbrs, scales, graph


def run(table: DataTable, config: PipelineConfig | None = None, baseline_pearson: bool = False) -> RunResult:
    config = config or PipelineConfig()
    table = standardize(table, config.standardize)
    nbrs, scales, graph = build_graph(table, config)
    dist = umap_distance_matrix(graph, config.metric_mode, config.disconnect_policy, table)
    curve = fit_curve(config.min_dist, config.spread)
    emb = embed(graph, curve, config.n_epochs, config.seed, config.embedding_dim)
    mean = frechet_mean(dist, table)
    cov = covariance(table, mean, dist)
    R = correlation_matrix(cov)
    circle = correlation_circle(table, emb, cov, orthogonalize=True)
    pearson = pearson_circle(table, emb) if baseline_pearson else None
    return RunResult(config, table, nbrs, scales, graph, dist, curve, emb, mean, cov, R, circle, pearson)
