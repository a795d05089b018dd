"""Riemannian mean, covariance, correlation and the correlation circle.

Rows of a table are points of a manifold whose distances come from the fuzzy
kNN graph. The mean is the row minimizing the sum of squared manifold
distances. Deviations from it are ordinary differences rescaled by the ratio
of manifold to Euclidean distance, and the covariance is their average outer
product.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .data import DataTable, InputError
from .embedding import Embedding
from .local_metric import DistanceMatrix


class DegenerateVarianceError(ArithmeticError):
    """A variable (or component) has zero spread, so correlations are undefined."""


@dataclass(frozen=True)
class FrechetMean:
    """The minimizing row. ``index`` is ``None`` for an externally supplied center."""

    index: int | None
    g: np.ndarray
    objective: float

    @classmethod
    def arithmetic(cls, table: DataTable) -> "FrechetMean":
        """Column means in place of the manifold mean (classical reduction)."""
        return cls(None, table.values.mean(axis=0), float("nan"))


@dataclass(frozen=True)
class RiemannianCovariance:
    rho: np.ndarray
    deviations: np.ndarray
    S: np.ndarray
    mean: FrechetMean


@dataclass(frozen=True)
class CorrelationCircle:
    coords: np.ndarray
    basis: np.ndarray
    orthogonalized: bool
    labels: tuple[str, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    @property
    def norms(self) -> np.ndarray:
        return np.sqrt(np.sum(self.coords**2, axis=1))


def rho_factor(d_umap: float, d_euclid: float) -> float:
    """Ratio of manifold to Euclidean distance; 1 for coincident points."""
    if d_euclid == 0:
        return 1.0
    return d_umap / d_euclid


def riemannian_subtract(x_a, x_b, rho_ab: float) -> np.ndarray:
    x_a = np.asarray(x_a, dtype=np.float64)
    x_b = np.asarray(x_b, dtype=np.float64)
    if x_a.shape != x_b.shape:
        raise InputError(f"dimension mismatch: {x_a.shape} vs {x_b.shape}")
    return rho_ab * (x_a - x_b)


def _dist_values(dist) -> np.ndarray:
    return dist.values if isinstance(dist, DistanceMatrix) else np.asarray(dist, dtype=np.float64)


def frechet_objectives(dist) -> np.ndarray:
    d = _dist_values(dist)
    return np.sum(d**2, axis=1)


def frechet_mean(dist, table: DataTable | None = None) -> FrechetMean:
    """Row minimizing the sum of squared distances; ties go to the lowest index.

    ``g`` is filled from ``table`` when given, otherwise left empty.
    """
    obj = frechet_objectives(dist)
    idx = int(np.argmin(obj))  # argmin returns the first minimum
    g = table.values[idx].copy() if table is not None else np.empty(0)
    return FrechetMean(idx, g, float(obj[idx]))


def covariance(
    table: DataTable,
    mean: FrechetMean,
    dist=None,
    *,
    rho: np.ndarray | None = None,
) -> RiemannianCovariance:
    """Average outer product of ``x_i (-) g`` over the rows.

    The per-row factors come from ``dist`` (manifold distances to the mean's
    row) unless ``rho`` is passed explicitly, which is required when the mean
    is not a data row.
    """
    x = table.values
    g = np.asarray(mean.g, dtype=np.float64)
    if g.shape != (table.p,):
        raise InputError(f"mean has shape {g.shape}, expected ({table.p},)")
    diffs = x - g
    if rho is None:
        if dist is None or mean.index is None:
            raise InputError("need a distance matrix and a row mean, or explicit rho")
        d_umap = _dist_values(dist)[:, mean.index]
        d_eu = np.sqrt(np.sum(diffs**2, axis=1))
        rho = np.array([rho_factor(du, de) for du, de in zip(d_umap, d_eu)])
    else:
        rho = np.asarray(rho, dtype=np.float64)
        if rho.shape != (table.n,):
            raise InputError(f"rho has shape {rho.shape}, expected ({table.n},)")
    dev = rho[:, None] * diffs
    S = dev.T @ dev / table.n
    S = 0.5 * (S + S.T)
    return RiemannianCovariance(rho, dev, S, mean)


def riemannian_correlation(cov: RiemannianCovariance, i: int, j: int) -> float:
    S = cov.S
    if S[i, i] <= 0 or S[j, j] <= 0:
        bad = i if S[i, i] <= 0 else j
        raise DegenerateVarianceError(f"variable {bad} has zero Riemannian variance")
    if i == j:
        return 1.0
    return float(S[i, j] / math.sqrt(S[i, i] * S[j, j]))


def correlation_matrix(cov: RiemannianCovariance) -> np.ndarray:
    """All pairwise Riemannian correlations, unit diagonal."""
    p = cov.S.shape[0]
    R = np.empty((p, p))
    for i in range(p):
        for j in range(p):
            R[i, j] = riemannian_correlation(cov, i, j)
    return R


def _component_deviations(emb, cov: RiemannianCovariance) -> np.ndarray:
    e = emb.coords if isinstance(emb, Embedding) else np.asarray(emb, dtype=np.float64)
    idx = cov.mean.index
    center = e[idx] if idx is not None else e.mean(axis=0)
    return cov.rho[:, None] * (e - center)


def correlation_circle(
    table: DataTable,
    emb,
    cov: RiemannianCovariance,
    orthogonalize: bool = True,
) -> CorrelationCircle:
    """Coordinates of each variable against the two layout axes.

    Variable deviations are ``rho_i (x_ij - g_j)``; component deviations are
    ``rho_i (e_ir - e_center,r)`` with the center at the mean's embedded row.
    With ``orthogonalize`` the component pair is replaced by an orthonormal
    basis of the same plane (first axis kept), so each coordinate pair is a
    projection of a unit vector and lies in the unit disk.
    """
    u = cov.deviations
    v = _component_deviations(emb, cov)
    if v.shape[0] != table.n or v.shape[1] < 2:
        raise InputError("embedding must have one row per table row and at least 2 columns")
    v = v[:, :2]
    unorm = np.sqrt(np.sum(u**2, axis=0))
    if np.any(unorm == 0):
        j = int(np.flatnonzero(unorm == 0)[0])
        raise DegenerateVarianceError(f"variable {table.col_labels[j]!r} has zero Riemannian variance")
    uhat = u / unorm
    notes = []
    if orthogonalize:
        basis = np.zeros_like(v)
        n1 = np.linalg.norm(v[:, 0])
        if n1 == 0:
            raise DegenerateVarianceError("first component has zero Riemannian variance")
        basis[:, 0] = v[:, 0] / n1
        w = v[:, 1] - (basis[:, 0] @ v[:, 1]) * basis[:, 0]
        # second Gram-Schmidt pass for orthogonality to working precision
        w = w - (basis[:, 0] @ w) * basis[:, 0]
        n2 = np.linalg.norm(w)
        if n2 <= 1e-12 * max(np.linalg.norm(v[:, 1]), 1e-300):
            msg = "components are linearly dependent; second coordinate set to 0"
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
            notes.append(msg)
        else:
            basis[:, 1] = w / n2
        coords = uhat.T @ basis
    else:
        vnorm = np.sqrt(np.sum(v**2, axis=0))
        if np.any(vnorm == 0):
            raise DegenerateVarianceError("a component has zero Riemannian variance")
        basis = v / vnorm
        coords = uhat.T @ basis
    return CorrelationCircle(coords, basis, orthogonalize, table.col_labels, tuple(notes))


def pearson_correlation_matrix(table: DataTable | np.ndarray, extra_columns=None) -> np.ndarray:
    """Classical Pearson correlations over the table's columns plus ``extra_columns``."""
    x = table.values if isinstance(table, DataTable) else np.asarray(table, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if extra_columns is not None:
        extra = np.asarray(extra_columns, dtype=np.float64)
        if extra.ndim == 1:
            extra = extra[:, None]
        x = np.hstack([x, extra])
    if x.shape[0] < 2:
        raise InputError("need at least 2 rows")
    c = x - x.mean(axis=0)
    norms = np.sqrt(np.sum(c**2, axis=0))
    if np.any(norms == 0):
        raise DegenerateVarianceError(f"column {int(np.flatnonzero(norms == 0)[0])} is constant")
    c = c / norms
    R = c.T @ c
    R = 0.5 * (R + R.T)
    np.fill_diagonal(R, 1.0)
    return R


def pearson_circle(table: DataTable, emb) -> np.ndarray:
    """Pearson correlation of every variable with the first two layout axes."""
    e = emb.coords if isinstance(emb, Embedding) else np.asarray(emb, dtype=np.float64)
    R = pearson_correlation_matrix(table, e[:, :2])
    return R[: table.p, table.p : table.p + 2]
