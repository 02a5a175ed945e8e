"""2D projection of document vectors for the cluster map.

Pipeline: exact k-NN graph -> per-point bandwidth calibration (binary search
so each point's neighborhood has effective size log2(k)) -> symmetrized fuzzy
edge weights -> stochastic attraction/repulsion layout from a spectral
initialization. Sequential and deterministic given the seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from numba import njit

from .rng import pcg32_randint, pcg32_uniform, spawn_generator, spawn_key

DEFAULT_N_NEIGHBORS = 15
DEFAULT_EPOCHS = 200
# standard published curve fit for min_dist=0.1
DEFAULT_A = 1.577
DEFAULT_B = 0.895
DEFAULT_NEG_RATE = 5
SIGMA_FLOOR_SCALE = 1e-3
_BISECT_LO = 1e-20
_BISECT_HI = 1e4
_BISECT_ITERS = 64


@dataclass
class NeighborGraph:
    n_neighbors: int
    indices: np.ndarray  # (D, k) int64, ascending by distance
    distances: np.ndarray  # (D, k) float64
    rho: np.ndarray | None = None  # (D,) distance to nearest neighbor
    sigma: np.ndarray | None = None  # (D,) bandwidth, > 0


@dataclass
class FuzzyGraph:
    n_points: int
    heads: np.ndarray  # (E,) int64, heads < tails
    tails: np.ndarray  # (E,) int64
    weights: np.ndarray  # (E,) float64 in (0, 1]


@dataclass
class Projection:
    ids: list
    coords: np.ndarray  # (D, 2) float64
    params: dict = field(default_factory=dict)


def knn_graph(vectors: np.ndarray, n_neighbors: int = DEFAULT_N_NEIGHBORS) -> NeighborGraph:
    """Exact brute-force k nearest neighbors, self excluded, ties by index."""
    pts = np.asarray(vectors, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("vectors must be a 2-D array")
    D = pts.shape[0]
    if n_neighbors < 1:
        raise ValueError("n_neighbors must be >= 1")
    if n_neighbors >= D:
        raise ValueError(f"n_neighbors={n_neighbors} must be < number of points ({D})")
    sq = (
        np.sum(pts**2, axis=1)[:, None]
        - 2.0 * pts @ pts.T
        + np.sum(pts**2, axis=1)[None, :]
    )
    np.maximum(sq, 0.0, out=sq)
    np.fill_diagonal(sq, np.inf)
    order = np.argsort(sq, axis=1, kind="stable")[:, :n_neighbors]
    dists = np.sqrt(np.take_along_axis(sq, order, axis=1))
    return NeighborGraph(n_neighbors=n_neighbors, indices=order.astype(np.int64), distances=dists)


def smooth_knn(graph: NeighborGraph) -> NeighborGraph:
    """Calibrate rho (nearest distance) and sigma per point.

    sigma solves sum_j exp(-max(0, d_ij - rho_i) / sigma) = log2(k) by binary
    search. When the target is unreachable (enough neighbors sit exactly at
    rho) the search collapses to the lower bracket; such sigmas are raised to
    a floor of 1e-3 times the point's mean neighbor distance.
    """
    D, k = graph.distances.shape
    target = np.log2(k)
    rho = graph.distances[:, 0].copy()
    sigma = np.empty(D, dtype=np.float64)
    for i in range(D):
        d = graph.distances[i]
        gaps = np.maximum(0.0, d - rho[i])
        lo, hi = _BISECT_LO, _BISECT_HI
        mid = 0.5 * (lo + hi)
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            if float(np.sum(np.exp(-gaps / mid))) >= target:
                hi = mid
            else:
                lo = mid
        floor = SIGMA_FLOOR_SCALE * float(np.mean(d))
        sigma[i] = max(mid, floor)
    graph.rho = rho
    graph.sigma = sigma
    return graph


def membership_strengths(graph: NeighborGraph) -> dict[tuple[int, int], float]:
    """Directed membership weights exp(-max(0, d - rho) / sigma) per neighbor."""
    if graph.rho is None or graph.sigma is None:
        raise ValueError("smooth_knn must run before membership_strengths")
    out: dict[tuple[int, int], float] = {}
    D = graph.indices.shape[0]
    for i in range(D):
        w = np.exp(-np.maximum(0.0, graph.distances[i] - graph.rho[i]) / graph.sigma[i])
        for j, wij in zip(graph.indices[i], w):
            out[(i, int(j))] = float(wij)
    return out


def fuzzy_union(directed: Mapping[tuple[int, int], float], n_points: int) -> FuzzyGraph:
    """Symmetrize directed weights with w = a + b - a*b (b = reverse, 0 if absent)."""
    merged: dict[tuple[int, int], float] = {}
    for (i, j), a in directed.items():
        if not (0.0 <= a <= 1.0):
            raise ValueError(f"directed weight {a} for edge ({i}, {j}) outside [0, 1]")
        if i == j:
            continue
        key = (i, j) if i < j else (j, i)
        if key in merged:
            continue
        b = directed.get((j, i), 0.0)
        merged[key] = a + b - a * b
    keys = sorted(k for k, w in merged.items() if w > 0.0)
    heads = np.array([k[0] for k in keys], dtype=np.int64)
    tails = np.array([k[1] for k in keys], dtype=np.int64)
    weights = np.array([merged[k] for k in keys], dtype=np.float64)
    return FuzzyGraph(n_points=n_points, heads=heads, tails=tails, weights=weights)


def fuzzy_graph(vectors: np.ndarray, n_neighbors: int = DEFAULT_N_NEIGHBORS) -> FuzzyGraph:
    graph = smooth_knn(knn_graph(vectors, n_neighbors))
    return fuzzy_union(membership_strengths(graph), np.asarray(vectors).shape[0])


def spectral_init(graph: FuzzyGraph, seed: int = 0) -> np.ndarray:
    """Laplacian eigenmap initialization scaled to [-10, 10]; seeded uniform
    fallback when the eigensolve fails or the graph is too small."""
    D = graph.n_points
    gen = spawn_generator(seed, 0)
    fallback = gen.uniform(-10.0, 10.0, size=(D, 2))
    if D < 3 or graph.weights.size == 0:
        return fallback
    W = np.zeros((D, D), dtype=np.float64)
    W[graph.heads, graph.tails] = graph.weights
    W[graph.tails, graph.heads] = graph.weights
    deg = W.sum(axis=1)
    if np.any(deg <= 0.0):
        return fallback
    inv_sqrt = 1.0 / np.sqrt(deg)
    lap = np.eye(D) - inv_sqrt[:, None] * W * inv_sqrt[None, :]
    try:
        _, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError:
        return fallback
    coords = np.ascontiguousarray(vecs[:, 1:3])
    if not np.all(np.isfinite(coords)):
        return fallback
    peak = float(np.abs(coords).max())
    if peak <= 0.0:
        return fallback
    return coords * (10.0 / peak)


@njit(cache=True, nogil=True)
def _layout_kernel(coords, heads, tails, weights, w_max, epochs, a, b, neg_rate, rng):
    D = coords.shape[0]
    E = heads.shape[0]
    for epoch in range(epochs):
        alpha = 1.0 - epoch / epochs
        for e in range(E):
            if pcg32_uniform(rng) >= weights[e] / w_max:
                continue
            i = heads[e]
            j = tails[e]
            dx = coords[i, 0] - coords[j, 0]
            dy = coords[i, 1] - coords[j, 1]
            d2 = dx * dx + dy * dy
            if d2 > 0.0:
                coeff = (-2.0 * a * b * d2 ** (b - 1.0)) / (1.0 + a * d2**b)
                gx = min(4.0, max(-4.0, coeff * dx))
                gy = min(4.0, max(-4.0, coeff * dy))
            else:
                gx = 0.0
                gy = 0.0
            coords[i, 0] += alpha * gx
            coords[i, 1] += alpha * gy
            coords[j, 0] -= alpha * gx
            coords[j, 1] -= alpha * gy
            for _ in range(neg_rate):
                u = pcg32_randint(rng, D)
                if u == i:
                    continue
                dx = coords[i, 0] - coords[u, 0]
                dy = coords[i, 1] - coords[u, 1]
                d2 = dx * dx + dy * dy
                if d2 > 0.0:
                    coeff = (2.0 * b) / ((0.001 + d2) * (1.0 + a * d2**b))
                    gx = min(4.0, max(-4.0, coeff * dx))
                    gy = min(4.0, max(-4.0, coeff * dy))
                else:
                    gx = 4.0
                    gy = 4.0
                coords[i, 0] += alpha * gx
                coords[i, 1] += alpha * gy


def optimize_layout(
    graph: FuzzyGraph,
    dim: int = 2,
    epochs: int = DEFAULT_EPOCHS,
    a: float = DEFAULT_A,
    b: float = DEFAULT_B,
    neg_rate: int = DEFAULT_NEG_RATE,
    seed: int = 0,
    init: np.ndarray | None = None,
    ids: Sequence | None = None,
) -> Projection:
    """Edge-sampled attraction/repulsion descent over the fuzzy graph.

    Each epoch visits every directed edge and samples it with probability
    weight / max weight; a sampled edge pulls both endpoints together and
    applies neg_rate repulsive pushes to its head against uniformly random
    points. Learning rate decays linearly from 1 to 0.
    """
    if dim != 2:
        raise ValueError("only 2-D layouts are supported")
    if graph.n_points < 1:
        raise ValueError("empty graph")
    if epochs < 0:
        raise ValueError("epochs must be >= 0")
    if init is None:
        coords = spectral_init(graph, seed)
    else:
        coords = np.array(init, dtype=np.float64)
        if coords.shape != (graph.n_points, 2):
            raise ValueError("init must have shape (n_points, 2)")
    if epochs > 0 and graph.weights.size > 0:
        heads = np.concatenate([graph.heads, graph.tails])
        tails = np.concatenate([graph.tails, graph.heads])
        weights = np.concatenate([graph.weights, graph.weights])
        _layout_kernel(
            coords,
            heads,
            tails,
            weights,
            float(weights.max()),
            epochs,
            float(a),
            float(b),
            neg_rate,
            spawn_key(seed, 1),
        )
    if not np.all(np.isfinite(coords)):
        raise RuntimeError("layout produced non-finite coordinates")
    if ids is None:
        ids = list(range(graph.n_points))
    return Projection(
        ids=list(ids),
        coords=coords,
        params={
            "n_points": graph.n_points,
            "epochs": epochs,
            "a": a,
            "b": b,
            "neg_rate": neg_rate,
            "seed": seed,
        },
    )


def project_documents(
    vectors: np.ndarray,
    ids: Sequence | None = None,
    n_neighbors: int = DEFAULT_N_NEIGHBORS,
    epochs: int = DEFAULT_EPOCHS,
    a: float = DEFAULT_A,
    b: float = DEFAULT_B,
    neg_rate: int = DEFAULT_NEG_RATE,
    seed: int = 0,
) -> Projection:
    """knn -> smooth -> union -> layout, carrying document ids through."""
    graph = fuzzy_graph(vectors, n_neighbors)
    proj = optimize_layout(
        graph, epochs=epochs, a=a, b=b, neg_rate=neg_rate, seed=seed, ids=ids
    )
    proj.params["n_neighbors"] = n_neighbors
    return proj
