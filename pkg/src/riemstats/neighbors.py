"""Exact Euclidean k-nearest neighbors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DataTable, InputError


@dataclass(frozen=True)
class NeighborLists:
    """Row-aligned ``(n, k)`` neighbor indices and distances.

    Each row is sorted by (distance, index) ascending and never contains the
    point itself.
    """

    indices: np.ndarray
    distances: np.ndarray

    @property
    def n(self) -> int:
        return self.indices.shape[0]

    @property
    def k(self) -> int:
        return self.indices.shape[1]

    def as_lists(self) -> list[list[tuple[int, float]]]:
        return [
            [(int(j), float(d)) for j, d in zip(row_i, row_d)]
            for row_i, row_d in zip(self.indices, self.distances)
        ]


def pairwise_euclidean(x: np.ndarray) -> np.ndarray:
    """Dense Euclidean distance matrix, exactly symmetric with zero diagonal."""
    x = np.asarray(x, dtype=np.float64)
    diff = x[:, None, :] - x[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return d


def exact_knn(table: DataTable | np.ndarray, k: int) -> NeighborLists:
    """Brute-force kNN on the rows of ``table``; ties go to the smaller index."""
    x = table.values if isinstance(table, DataTable) else np.asarray(table, dtype=np.float64)
    n = x.shape[0]
    if not 1 <= k <= n - 1:
        raise InputError(f"k out of range: need 1 <= k <= {n - 1}, got {k}")
    d = pairwise_euclidean(x)
    idx = np.empty((n, k), dtype=np.intp)
    dist = np.empty((n, k), dtype=np.float64)
    cols = np.arange(n)
    for i in range(n):
        mask = cols != i
        cand = cols[mask]
        # lexsort: last key is primary
        order = np.lexsort((cand, d[i, mask]))[:k]
        idx[i] = cand[order]
        dist[i] = d[i, idx[i]]
    idx.setflags(write=False)
    dist.setflags(write=False)
    return NeighborLists(idx, dist)
