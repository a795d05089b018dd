"""Fuzzy 1-skeleton of the kNN graph and the induced all-pairs distances.

Each point gets a local scale (``rho``, ``sigma``) so that its directed
memberships ``exp(-max(0, d - rho) / sigma)`` sum to ``log2(k)``. Directed
memberships are merged with the probabilistic t-conorm, turned into edge
lengths ``-ln(mu)``, and extended to every pair of points either by shortest
paths (``geodesic``) or by the single-linkage merge height (``minimax``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra, minimum_spanning_tree

from .data import DataTable, InputError
from .neighbors import NeighborLists, pairwise_euclidean

SIGMA_MIN = 1e-12
SIGMA_SCALE = 1e3
CALIBRATION_TOL = 1e-5
CALIBRATION_ITERS = 64
MEMBERSHIP_CLAMP = 1e-6


class DisconnectedGraphError(InputError):
    """The fuzzy graph has several components and bridging is disabled."""

    def __init__(self, components: list[list[int]]):
        self.components = components
        a, b = components[0], components[1]
        super().__init__(
            f"fuzzy graph is disconnected ({len(components)} components); "
            f"component 0 {a} is not joined to component 1 {b}"
        )


@dataclass(frozen=True)
class LocalScales:
    rho: np.ndarray
    sigma: np.ndarray
    clamped: np.ndarray
    target: float


@dataclass(frozen=True)
class FuzzyGraph:
    """Directed memberships ``w`` and symmetric ``mu`` / ``ell`` as dense n x n arrays.

    A zero in ``w`` or ``mu`` means "no edge"; ``ell`` is ``inf`` there.
    """

    w: np.ndarray
    mu: np.ndarray
    ell: np.ndarray

    @property
    def n(self) -> int:
        return self.mu.shape[0]

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Upper-triangle edge endpoints ``(i, j)`` with ``i < j``, row-major order."""
        i, j = np.nonzero(np.triu(self.mu > 0, k=1))
        return i, j

    def components(self) -> list[list[int]]:
        _, labels = connected_components(csr_matrix(self.mu > 0), directed=False)
        return _group(labels)


@dataclass(frozen=True)
class DistanceMatrix:
    values: np.ndarray
    mode: str
    bridges: tuple[tuple[int, int, float], ...] = ()

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _group(labels: np.ndarray) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def membership_sum(distances: np.ndarray, rho: float, sigma: float) -> float:
    return float(np.sum(np.exp(-np.maximum(0.0, distances - rho) / sigma)))


def _calibrate(distances: np.ndarray, rho: float, target: float, hi: float):
    lo = SIGMA_MIN
    if membership_sum(distances, rho, lo) >= target + CALIBRATION_TOL:
        return lo, True
    if membership_sum(distances, rho, hi) <= target - CALIBRATION_TOL:
        return hi, True
    mid = 0.5 * (lo + hi)
    for _ in range(CALIBRATION_ITERS):
        mid = 0.5 * (lo + hi)
        psum = membership_sum(distances, rho, mid)
        if abs(psum - target) <= CALIBRATION_TOL:
            break
        # the sum increases with sigma
        if psum > target:
            hi = mid
        else:
            lo = mid
    return mid, False


def compute_local_scales(nbrs: NeighborLists, k: int | None = None) -> LocalScales:
    """Find ``rho_i`` (nearest-neighbor distance) and bisect for ``sigma_i``.

    The target is ``log2(k)``. A point whose target is unreachable inside
    ``[SIGMA_MIN, sigma_max]`` is clamped to the nearer bound and flagged.
    """
    k = nbrs.k if k is None else k
    target = math.log2(k)
    dist = nbrs.distances
    sigma_max = SIGMA_SCALE * (float(dist.max()) + 1.0)
    n = nbrs.n
    rho = dist[:, 0].copy()
    sigma = np.empty(n)
    clamped = np.zeros(n, dtype=bool)
    for i in range(n):
        sigma[i], clamped[i] = _calibrate(dist[i], rho[i], target, sigma_max)
    return LocalScales(rho, sigma, clamped, target)


def fuzzy_memberships(nbrs: NeighborLists, scales: LocalScales) -> FuzzyGraph:
    n = nbrs.n
    w = np.zeros((n, n))
    vals = np.exp(-np.maximum(0.0, nbrs.distances - scales.rho[:, None]) / scales.sigma[:, None])
    rows = np.repeat(np.arange(n), nbrs.k)
    w[rows, nbrs.indices.ravel()] = vals.ravel()
    wt = w.T
    mu = w + wt - w * wt
    # bit-exact symmetry regardless of rounding order
    mu = np.triu(mu, 1)
    mu = mu + mu.T
    with np.errstate(divide="ignore"):
        ell = np.where(mu > 0, -np.log(np.minimum(mu, 1.0 - MEMBERSHIP_CLAMP)), np.inf)
    np.fill_diagonal(ell, 0.0)
    return FuzzyGraph(w, mu, ell)


def _bridge(graph: FuzzyGraph, x: np.ndarray, components: list[list[int]]):
    """One scaled Euclidean edge between the closest pair of every two components."""
    eucl = pairwise_euclidean(x)
    i, j = graph.edges()
    mean_ell = float(graph.ell[i, j].mean()) if i.size else 1.0
    mean_eu = float(eucl[i, j].mean()) if i.size else 0.0
    c = mean_ell / mean_eu if mean_eu > 0 else 1.0
    floor = -math.log(1.0 - MEMBERSHIP_CLAMP)
    bridges = []
    for a in range(len(components)):
        for b in range(a + 1, len(components)):
            ca, cb = np.array(components[a]), np.array(components[b])
            block = eucl[np.ix_(ca, cb)]
            r, s = np.unravel_index(np.argmin(block), block.shape)
            u, v = int(ca[r]), int(cb[s])
            bridges.append((min(u, v), max(u, v), max(c * float(block[r, s]), floor)))
    return bridges


def _close_triangles(d: np.ndarray) -> np.ndarray:
    """Min-plus relaxation until no entry changes.

    Dijkstra sums edges in path order, so ``d[i, k] <= d[i, j] + d[j, k]`` can
    fail by an ulp; the fixed point satisfies it exactly in floating point.
    """
    n = d.shape[0]
    while True:
        changed = False
        for j in range(n):
            cand = d[:, j, None] + d[None, j, :]
            upd = cand < d
            if upd.any():
                d = np.where(upd, cand, d)
                changed = True
        if not changed:
            return d


def _minimax(weights: np.ndarray) -> np.ndarray:
    n = weights.shape[0]
    mst = minimum_spanning_tree(csr_matrix(np.where(np.isfinite(weights), weights, 0.0)))
    mst = mst + mst.T
    adj = [[] for _ in range(n)]
    coo = mst.tocoo()
    for u, v, wt in zip(coo.row, coo.col, coo.data):
        adj[u].append((int(v), float(wt)))
    out = np.zeros((n, n))
    for s in range(n):
        best = out[s]
        seen = np.zeros(n, dtype=bool)
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for v, wt in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    best[v] = max(best[u], wt)
                    stack.append(v)
    return np.minimum(out, out.T)


def umap_distance_matrix(
    graph: FuzzyGraph,
    mode: str = "geodesic",
    policy: str = "euclidean_bridge",
    table: DataTable | np.ndarray | None = None,
) -> DistanceMatrix:
    """All-pairs distances over edge lengths ``ell``.

    Disconnected graphs are bridged (``euclidean_bridge``, needs ``table``)
    or rejected (``fail``).
    """
    if mode not in ("geodesic", "minimax"):
        raise InputError(f"unknown metric mode {mode!r}")
    weights = graph.ell.copy()
    comps = graph.components()
    bridges = []
    if len(comps) > 1:
        if policy == "fail":
            raise DisconnectedGraphError(comps)
        if policy != "euclidean_bridge":
            raise InputError(f"unknown disconnect policy {policy!r}")
        if table is None:
            raise InputError("euclidean_bridge needs the data table")
        x = table.values if isinstance(table, DataTable) else np.asarray(table, dtype=np.float64)
        bridges = _bridge(graph, x, comps)
        for u, v, wt in bridges:
            weights[u, v] = weights[v, u] = wt
    if mode == "geodesic":
        sparse = csr_matrix(np.where(np.isfinite(weights), weights, 0.0))
        d = dijkstra(sparse, directed=False)
        d = np.minimum(d, d.T)
        np.fill_diagonal(d, 0.0)
        d = _close_triangles(d)
    else:
        d = _minimax(weights)
    d.setflags(write=False)
    return DistanceMatrix(d, mode, tuple(bridges))
