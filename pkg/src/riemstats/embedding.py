"""Low-dimensional layout by fuzzy cross-entropy minimization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from .data import InputError
from .local_metric import MEMBERSHIP_CLAMP, FuzzyGraph

NEGATIVE_SAMPLES = 5
GRAD_CLIP = 4.0
REPULSION_EPS = 1e-3
NU_CLAMP = 1e-12
INIT_SCALE = 10.0


@dataclass(frozen=True)
class CurveParams:
    a: float
    b: float

    def phi(self, d):
        """Low-dimensional membership ``1 / (1 + a d^(2b))``."""
        d = np.asarray(d, dtype=np.float64)
        return 1.0 / (1.0 + self.a * d ** (2.0 * self.b))


@dataclass(frozen=True)
class Embedding:
    coords: np.ndarray
    epochs: int = 0
    cross_entropy: float = float("nan")
    spectral: bool = True


def target_curve(d, min_dist: float, spread: float = 1.0):
    d = np.asarray(d, dtype=np.float64)
    return np.where(d <= min_dist, 1.0, np.exp(-(d - min_dist) / spread))


def fit_curve(min_dist: float = 0.1, spread: float = 1.0) -> CurveParams:
    """Least-squares fit of ``(a, b)`` to the piecewise target on 300 points of ``[0, 3 spread]``."""
    if min_dist < 0 or spread <= 0:
        raise InputError("need min_dist >= 0 and spread > 0")
    xv = np.linspace(0.0, 3.0 * spread, 300)
    yv = target_curve(xv, min_dist, spread)

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2.0 * b))

    (a, b), _ = curve_fit(curve, xv, yv, p0=(1.0, 1.0), bounds=([1e-8, 1e-8], [np.inf, np.inf]))
    return CurveParams(float(a), float(b))


def _noise_init(n: int, dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-INIT_SCALE, INIT_SCALE, size=(n, dim))


def spectral_init(graph: FuzzyGraph, dim: int = 2, seed: int = 42) -> Embedding:
    """Bottom nontrivial eigenvectors of the normalized Laplacian of ``mu``.

    Coordinates are scaled so the largest absolute entry is 10. Falls back to
    seeded uniform noise on ``[-10, 10]`` when the eigensolve fails.
    """
    n = graph.n
    mu = graph.mu
    deg = mu.sum(axis=1)
    if dim + 1 > n or np.any(deg <= 0):
        return Embedding(_noise_init(n, dim, seed), spectral=False)
    inv_sqrt = 1.0 / np.sqrt(deg)
    lap = np.eye(n) - inv_sqrt[:, None] * mu * inv_sqrt[None, :]
    lap = 0.5 * (lap + lap.T)
    try:
        _, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError:
        return Embedding(_noise_init(n, dim, seed), spectral=False)
    coords = vecs[:, 1 : dim + 1].copy()
    # eigenvector signs are arbitrary; pin the largest-magnitude entry positive
    for r in range(dim):
        col = coords[:, r]
        if col[np.argmax(np.abs(col))] < 0:
            coords[:, r] = -col
    peak = np.abs(coords).max()
    if not np.isfinite(peak) or peak == 0:
        return Embedding(_noise_init(n, dim, seed), spectral=False)
    return Embedding(coords * (INIT_SCALE / peak))


def attractive_gradient(yi, yj, a: float, b: float) -> np.ndarray:
    """Gradient in ``yi`` of ``-ln phi(|yi - yj|)``."""
    diff = np.asarray(yi, dtype=np.float64) - np.asarray(yj, dtype=np.float64)
    d2 = float(diff @ diff)
    if d2 == 0.0:
        return np.zeros_like(diff)
    coeff = 2.0 * a * b * d2 ** (b - 1.0) / (1.0 + a * d2**b)
    return coeff * diff


def repulsive_gradient(yi, yj, a: float, b: float, eps: float = 0.0) -> np.ndarray:
    """Gradient in ``yi`` of ``-ln(1 - phi(|yi - yj|))``.

    ``eps`` is added to the squared distance in the denominator; the layout
    optimizer uses ``REPULSION_EPS`` there to stay finite at coincident points.
    """
    diff = np.asarray(yi, dtype=np.float64) - np.asarray(yj, dtype=np.float64)
    d2 = float(diff @ diff)
    coeff = -2.0 * b / ((eps + d2) * (1.0 + a * d2**b))
    return coeff * diff


def _clip(x: float) -> float:
    return GRAD_CLIP if x > GRAD_CLIP else (-GRAD_CLIP if x < -GRAD_CLIP else x)


def optimize_layout(
    init: Embedding,
    graph: FuzzyGraph,
    params: CurveParams,
    epochs: int = 200,
    seed: int = 42,
) -> Embedding:
    """Sequential SGD on the fuzzy cross-entropy with negative sampling.

    Each epoch visits the edges in a fixed order; edge ``(i, j)`` fires with
    probability ``mu_ij / max(mu)``, pulling both endpoints together, then
    pushes ``i`` away from ``NEGATIVE_SAMPLES`` uniformly drawn points. The
    step size decays linearly from 1 to 0 and every coordinate step is
    clipped to ``[-4, 4]``.
    """
    if epochs < 1:
        raise InputError("epochs must be at least 1")
    rng = np.random.default_rng(seed)
    ei, ej = graph.edges()
    mu = graph.mu[ei, ej]
    n, dim = init.coords.shape
    y = [list(map(float, row)) for row in init.coords]
    a, b = params.a, params.b
    prob = mu / mu.max() if mu.size else mu
    heads, tails = ei.tolist(), ej.tolist()
    m = len(heads)
    for epoch in range(epochs):
        alpha = 1.0 - epoch / epochs
        fire = (rng.random(m) < prob).tolist()
        neg = rng.integers(0, n, size=(m, NEGATIVE_SAMPLES)).tolist()
        for e in range(m):
            if not fire[e]:
                continue
            i, j = heads[e], tails[e]
            yi, yj = y[i], y[j]
            d2 = 0.0
            for r in range(dim):
                t = yi[r] - yj[r]
                d2 += t * t
            if d2 > 0.0:
                coeff = -2.0 * a * b * d2 ** (b - 1.0) / (1.0 + a * d2**b)
                for r in range(dim):
                    step = _clip(coeff * (yi[r] - yj[r])) * alpha
                    yi[r] += step
                    yj[r] -= step
            for k in neg[e]:
                if k == i:
                    continue
                yk = y[k]
                d2 = 0.0
                for r in range(dim):
                    t = yi[r] - yk[r]
                    d2 += t * t
                if d2 > 0.0:
                    coeff = 2.0 * b / ((REPULSION_EPS + d2) * (1.0 + a * d2**b))
                    for r in range(dim):
                        yi[r] += _clip(coeff * (yi[r] - yk[r])) * alpha
                else:
                    for r in range(dim):
                        yi[r] += GRAD_CLIP * alpha
    coords = np.array(y)
    return Embedding(coords, epochs, cross_entropy(graph, coords, params), init.spectral)


def _xlogy_ratio(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, p * np.log(p / q), 0.0)


def edge_cross_entropy(mu, nu) -> np.ndarray:
    """Per-edge fuzzy-set cross-entropy, ``nu`` clamped away from 0 and 1."""
    mu = np.minimum(np.asarray(mu, dtype=np.float64), 1.0 - MEMBERSHIP_CLAMP)
    nu = np.clip(np.asarray(nu, dtype=np.float64), NU_CLAMP, 1.0 - NU_CLAMP)
    return _xlogy_ratio(mu, nu) + _xlogy_ratio(1.0 - mu, 1.0 - nu)


def cross_entropy(graph: FuzzyGraph, emb: Embedding | np.ndarray, params: CurveParams) -> float:
    coords = emb.coords if isinstance(emb, Embedding) else np.asarray(emb, dtype=np.float64)
    if coords.shape[0] != graph.n:
        raise InputError("embedding and graph sizes differ")
    ei, ej = graph.edges()
    dist = np.sqrt(np.sum((coords[ei] - coords[ej]) ** 2, axis=1))
    return float(np.sum(edge_cross_entropy(graph.mu[ei, ej], params.phi(dist))))


def embed(graph: FuzzyGraph, params: CurveParams, epochs: int = 200, seed: int = 42, dim: int = 2) -> Embedding:
    """Spectral initialization followed by ``optimize_layout``."""
    init = spectral_init(graph, dim, seed)
    return optimize_layout(init, graph, params, epochs, seed)


__all__ = [
    "CurveParams",
    "Embedding",
    "attractive_gradient",
    "cross_entropy",
    "embed",
    "fit_curve",
    "optimize_layout",
    "repulsive_gradient",
    "spectral_init",
]
