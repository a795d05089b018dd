"""Čech complexes up to dimension 2, single linkage and mod-2 Betti numbers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .data import InputError


class ClosureError(ValueError):
    """A simplex is present without one of its faces."""


@dataclass(frozen=True, order=True)
class Simplex:
    vertices: tuple[int, ...]

    def __post_init__(self):
        v = tuple(int(i) for i in self.vertices)
        if not v or any(a >= b for a, b in zip(v, v[1:])):
            raise ValueError(f"simplex vertices must be strictly increasing: {v}")
        if len(v) > 3:
            raise ValueError("only simplices of dimension <= 2 are supported")
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> list["Simplex"]:
        if self.dim == 0:
            return []
        return [Simplex(f) for f in itertools.combinations(self.vertices, self.dim)]


@dataclass(frozen=True)
class FilteredComplex:
    """Simplices mapped to the scale at which they appear."""

    births: dict
    epsilon: float = math.inf

    def simplices(self, dim: int | None = None) -> list[Simplex]:
        out = [s for s in self.births if dim is None or s.dim == dim]
        return sorted(out, key=lambda s: (s.dim, s.vertices))

    def counts(self) -> tuple[int, int, int]:
        c = [0, 0, 0]
        for s in self.births:
            c[s.dim] += 1
        return c[0], c[1], c[2]

    @property
    def closed(self) -> bool:
        for s, t in self.births.items():
            for f in s.faces():
                if f not in self.births or self.births[f] > t:
                    return False
        return True

    def at(self, epsilon: float) -> "FilteredComplex":
        """Subcomplex of simplices born at or before ``epsilon``."""
        return FilteredComplex({s: t for s, t in self.births.items() if t <= epsilon}, epsilon)

    def __contains__(self, s) -> bool:
        return (s if isinstance(s, Simplex) else Simplex(tuple(s))) in self.births


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, u: int) -> int:
        root = u
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[u] != root:
            self.parent[u], u = root, self.parent[u]
        return root

    def union(self, u: int, v: int) -> None:
        ru, rv = self.find(u), self.find(v)
        if ru != rv:
            # keep the smaller index as root for stable output
            if rv < ru:
                ru, rv = rv, ru
            self.parent[rv] = ru

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values(), key=lambda g: g[0])


def _as_points(points) -> np.ndarray:
    x = np.asarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    return x


def _distances(x: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def single_linkage_components(points, epsilon: float) -> list[list[int]]:
    """Groups of points chained by steps of Euclidean length at most ``epsilon``."""
    if epsilon < 0:
        raise InputError("epsilon must be nonnegative")
    x = _as_points(points)
    d = _distances(x)
    n = len(x)
    uf = _UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if d[i, j] <= epsilon:
                uf.union(i, j)
    return uf.groups()


def min_enclosing_radius(a, b, c) -> float:
    """Radius of the smallest ball containing three points in any dimension.

    For an acute triangle this is the circumradius; otherwise it is half of
    the longest side.
    """
    a, b, c = (np.asarray(p, dtype=np.float64) for p in (a, b, c))
    sides = sorted(
        [float(np.sum((b - c) ** 2)), float(np.sum((a - c) ** 2)), float(np.sum((a - b) ** 2))]
    )
    s0, s1, s2 = sides
    if s2 >= s0 + s1:
        return 0.5 * math.sqrt(s2)
    # acute: circumradius R = abc / (4 * area), area from the Gram determinant
    u, v = b - a, c - a
    uu, vv, uv = float(u @ u), float(v @ v), float(u @ v)
    area2 = uu * vv - uv * uv
    if area2 <= 0:
        return 0.5 * math.sqrt(s2)
    return math.sqrt(s0 * s1 * s2 / (4.0 * area2))


def cech_complex(points, epsilon: float) -> FilteredComplex:
    """Čech complex of balls of radius ``epsilon``, truncated at dimension 2.

    Births are the ball radii at which each simplex appears: 0 for vertices,
    half the length for edges, the minimum enclosing radius for triangles.
    """
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    x = _as_points(points)
    n = len(x)
    d = _distances(x)
    births: dict = {Simplex((i,)): 0.0 for i in range(n)}
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if d[i, j] <= 2.0 * epsilon:
                births[Simplex((i, j))] = 0.5 * float(d[i, j])
                adj[i].add(j)
    for i in range(n):
        for j in sorted(adj[i]):
            for k in sorted(adj[i] & adj[j]):
                if k <= j:
                    continue
                r = min_enclosing_radius(x[i], x[j], x[k])
                if r <= epsilon:
                    t = max(r, births[Simplex((i, j))], births[Simplex((i, k))], births[Simplex((j, k))])
                    births[Simplex((i, j, k))] = t
    return FilteredComplex(births, epsilon)


def _gf2_rank(columns: list[int]) -> int:
    """Rank over GF(2) of vectors given as integer bitmasks."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            if top in pivots:
                col ^= pivots[top]
            else:
                pivots[top] = col
                rank += 1
                break
    return rank


def boundary_ranks(complex_: FilteredComplex) -> tuple[int, int]:
    verts = complex_.simplices(0)
    edges = complex_.simplices(1)
    tris = complex_.simplices(2)
    vpos = {s.vertices[0]: i for i, s in enumerate(verts)}
    epos = {s.vertices: i for i, s in enumerate(edges)}
    d1 = [(1 << vpos[a]) | (1 << vpos[b]) for a, b in (e.vertices for e in edges)]
    d2 = []
    for t in tris:
        i, j, k = t.vertices
        d2.append((1 << epos[(i, j)]) | (1 << epos[(i, k)]) | (1 << epos[(j, k)]))
    return _gf2_rank(d1), _gf2_rank(d2)


def betti_numbers(complex_: FilteredComplex, with_b2: bool = False):
    """``(b0, b1)`` over GF(2); ``(b0, b1, b2)`` when ``with_b2``."""
    if not complex_.closed:
        raise ClosureError("complex is missing a face of one of its simplices")
    nv, ne, nt = complex_.counts()
    r1, r2 = boundary_ranks(complex_)
    b0 = nv - r1
    b1 = (ne - r1) - r2
    b2 = nt - r2
    return (b0, b1, b2) if with_b2 else (b0, b1)


def sweep(points, epsilons) -> list[dict]:
    """Simplex counts and Betti numbers at each scale."""
    out = []
    for eps in epsilons:
        cx = cech_complex(points, float(eps))
        b0, b1 = betti_numbers(cx)
        nv, ne, nt = cx.counts()
        out.append({"epsilon": float(eps), "vertices": nv, "edges": ne, "triangles": nt, "b0": b0, "b1": b1})
    return out


@dataclass(frozen=True)
class NerveReport:
    trials: int
    mismatches: int
    union_components: int
    complex_components: int


def nerve_consistency_check(
    points,
    epsilon: float,
    trials: int = 10_000,
    seed: int = 0,
    resolution: int = 20,
    max_resolution: int = 400,
) -> NerveReport:
    """Compare ball-union connectivity with Čech-complex connectivity.

    The union of radius-``epsilon`` discs is rasterized and its connected
    components are labeled by flood fill. The grid step is ``epsilon /
    resolution``, refined to a quarter of the smallest ``|d_ij - 2 epsilon|``
    so that near-tangent pairs are resolved (never finer than ``epsilon /
    max_resolution``).
    ``trials`` cells of the union are drawn at random; each consecutive pair is
    a mismatch when "same union component" disagrees with "nearest centers in
    the same complex component".
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    x = _as_points(points)
    if x.shape[1] != 2:
        raise InputError("nerve check works on planar points")
    h = epsilon / resolution
    if len(x) > 1:
        iu = np.triu_indices(len(x), 1)
        margin = float(np.min(np.abs(_distances(x)[iu] - 2 * epsilon)))
        h = max(min(h, margin / 4), epsilon / max_resolution)
    lo = x.min(axis=0) - epsilon - 2 * h
    hi = x.max(axis=0) + epsilon + 2 * h
    gx = np.arange(lo[0], hi[0] + h, h)
    gy = np.arange(lo[1], hi[1] + h, h)
    X, Y = np.meshgrid(gx, gy, indexing="ij")
    cells = np.stack([X.ravel(), Y.ravel()], axis=1)
    inside = np.zeros(len(cells), dtype=bool)
    nearest = np.full(len(cells), -1)
    best = np.full(len(cells), np.inf)
    for i, c in enumerate(x):
        dd = np.sum((cells - c) ** 2, axis=1)
        closer = dd < best
        best[closer] = dd[closer]
        nearest[closer] = i
        inside |= dd <= epsilon**2
    labels, n_union = ndimage.label(inside.reshape(X.shape), structure=np.ones((3, 3)))
    labels = labels.ravel()

    comp_of = np.empty(len(x), dtype=int)
    cx = cech_complex(x, epsilon)
    uf = _UnionFind(len(x))
    for s in cx.simplices(1):
        uf.union(*s.vertices)
    groups = uf.groups()
    for g, members in enumerate(groups):
        comp_of[members] = g

    rng = np.random.default_rng(seed)
    pool = np.flatnonzero(inside)
    picks = rng.choice(pool, size=trials + 1, replace=True)
    same_union = labels[picks[1:]] == labels[picks[:-1]]
    same_complex = comp_of[nearest[picks[1:]]] == comp_of[nearest[picks[:-1]]]
    mismatches = int(np.sum(same_union != same_complex))
    return NerveReport(trials, mismatches, int(n_union), len(groups))
