"""k-means++ / Lloyd clustering of document vectors, plus the cluster-level
reporting the analyst workflow needs: within-cluster dispersion, centroid-
nearest representatives, display-radius filtering, and nearest-centroid
classification of new vectors.

All randomness inside kmeans is indexed by document id (the D^2 sampling walk
runs in id-sorted order), so any permutation of the input rows yields the
same partition.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Sequence

import numpy as np

from .rng import spawn_generator


@dataclass
class ClusterModel:
    k: int
    dim: int
    centroids: np.ndarray  # (k, dim) float64
    doc_ids: list
    assignments: dict  # doc id -> cluster id
    distances: dict  # doc id -> Euclidean distance to its centroid
    sizes: list[int]
    labels: dict[int, str] = field(default_factory=dict)
    n_iter: int = 0
    objective_history: list[float] = field(default_factory=list)

    def members(self, cluster_id: int) -> list:
        return [d for d in self.doc_ids if self.assignments[d] == cluster_id]


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # (D, k) squared Euclidean distances, numerically clipped at zero
    sq = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centroids.T
        + np.sum(centroids**2, axis=1)[None, :]
    )
    return np.maximum(sq, 0.0)


def _plusplus_init(points: np.ndarray, k: int, gen: np.random.Generator) -> np.ndarray:
    """k-means++ seeding; `points` must already be in id-sorted order."""
    D = points.shape[0]
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = int(np.floor(gen.random() * D))
    d2 = np.sum((points - points[chosen[0]]) ** 2, axis=1)
    for j in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            # all remaining points coincide with a centroid; take the first unchosen
            mask = np.ones(D, dtype=bool)
            mask[chosen[:j]] = False
            chosen[j] = int(np.nonzero(mask)[0][0])
        else:
            u = gen.random() * total
            chosen[j] = int(np.searchsorted(np.cumsum(d2), u, side="right"))
        d2 = np.minimum(d2, np.sum((points - points[chosen[j]]) ** 2, axis=1))
    return points[chosen].copy()


def kmeans(
    vectors: np.ndarray,
    k: int,
    seed: int = 0,
    max_iter: int = 300,
    tol: float = 1e-6,
    ids: Sequence[Hashable] | None = None,
) -> ClusterModel:
    """Lloyd iterations from a k-means++ seed; deterministic given seed.

    Runs to an assignment fixpoint, a centroid shift below tol, or max_iter.
    An emptied cluster is reseeded to the point farthest from its assigned
    centroid (ties to the id-sorted first).
    """
    points = np.asarray(vectors, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("vectors must be a 2-D array")
    D = points.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > D:
        raise ValueError(f"k={k} exceeds the number of points ({D})")
    if not np.all(np.isfinite(points)):
        raise ValueError("vectors must be finite")
    if ids is None:
        ids = list(range(D))
    else:
        ids = list(ids)
        if len(ids) != D:
            raise ValueError("ids length must match vectors")
    order = sorted(range(D), key=lambda i: ids[i])
    pts = points[order]

    gen = spawn_generator(seed, 0)
    centroids = _plusplus_init(pts, k, gen)

    labels = np.argmin(_squared_distances(pts, centroids), axis=1)
    objective_history: list[float] = []
    n_iter = 0
    for it in range(max_iter):
        n_iter = it + 1
        new_centroids = np.empty_like(centroids)
        counts = np.bincount(labels, minlength=k)
        for c in range(k):
            if counts[c] > 0:
                new_centroids[c] = pts[labels == c].mean(axis=0)
            else:
                new_centroids[c] = centroids[c]  # repaired below
        empty = [c for c in range(k) if counts[c] == 0]
        if empty:
            sq = _squared_distances(pts, new_centroids)
            own = sq[np.arange(D), labels]
            used: set[int] = set()
            for c in empty:
                far = int(np.argmax(np.where(np.isin(np.arange(D), list(used)), -1.0, own)))
                new_centroids[c] = pts[far]
                used.add(far)
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        sq = _squared_distances(pts, centroids)
        new_labels = np.argmin(sq, axis=1)
        objective_history.append(float(sq[np.arange(D), new_labels].sum()))
        converged = bool(np.array_equal(new_labels, labels)) and not empty
        labels = new_labels
        if converged or (shift < tol and not empty):
            break

    dists = np.sqrt(_squared_distances(pts, centroids)[np.arange(D), labels])
    sorted_ids = [ids[i] for i in order]
    assignments = {doc: int(c) for doc, c in zip(sorted_ids, labels)}
    distances = {doc: float(d) for doc, d in zip(sorted_ids, dists)}
    sizes = np.bincount(labels, minlength=k).tolist()
    return ClusterModel(
        k=k,
        dim=points.shape[1],
        centroids=centroids,
        doc_ids=sorted_ids,
        assignments=assignments,
        distances=distances,
        sizes=sizes,
        n_iter=n_iter,
        objective_history=objective_history,
    )


def dispersion(model: ClusterModel, cluster_id: int) -> float:
    """Mean Euclidean distance of a cluster's members to its centroid."""
    members = model.members(cluster_id)
    if not members:
        raise ValueError(f"cluster {cluster_id} is empty")
    return float(np.mean([model.distances[d] for d in members]))


def representatives(model: ClusterModel, cluster_id: int, n: int = 15) -> list:
    """The n member ids nearest the centroid, distance then id ascending."""
    members = model.members(cluster_id)
    if not members:
        raise ValueError(f"cluster {cluster_id} is empty")
    members.sort(key=lambda d: (model.distances[d], d))
    return members[:n]


def plot_filter(model: ClusterModel, radius: float | None) -> list:
    """Ids of documents within `radius` of their own centroid (None means all)."""
    if radius is None:
        return list(model.doc_ids)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    return [d for d in model.doc_ids if model.distances[d] <= radius]


def assign(model: ClusterModel, vector: np.ndarray) -> tuple[int, float]:
    """Nearest centroid by Euclidean distance; ties go to the smaller cluster id."""
    vec = np.asarray(vector, dtype=np.float64).ravel()
    if vec.shape[0] != model.dim:
        raise ValueError(f"vector dimension {vec.shape[0]} != model dimension {model.dim}")
    sq = np.sum((model.centroids - vec[None, :]) ** 2, axis=1)
    c = int(np.argmin(sq))
    return c, float(np.sqrt(max(sq[c], 0.0)))


def save_cluster_model(model: ClusterModel, json_path: str | Path, csv_path: str | Path | None = None) -> None:
    """JSON with centroids/sizes/dispersions/labels; optional per-doc CSV."""
    payload = {
        "k": model.k,
        "dim": model.dim,
        "centroids": [[float(x) for x in row] for row in model.centroids],
        "sizes": model.sizes,
        "dispersions": [
            dispersion(model, c) if model.sizes[c] else None for c in range(model.k)
        ],
        "labels": {str(c): lbl for c, lbl in sorted(model.labels.items())},
    }
    Path(json_path).write_text(json.dumps(payload, sort_keys=True, indent=1), encoding="utf-8")
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["doc_id", "cluster_id", "distance"])
            for d in model.doc_ids:
                writer.writerow([d, model.assignments[d], repr(model.distances[d])])


def load_cluster_model(json_path: str | Path, csv_path: str | Path | None = None) -> ClusterModel:
    payload = json.loads(Path(json_path).read_text(encoding="utf-8"))
    centroids = np.asarray(payload["centroids"], dtype=np.float64)
    model = ClusterModel(
        k=payload["k"],
        dim=payload["dim"],
        centroids=centroids,
        doc_ids=[],
        assignments={},
        distances={},
        sizes=list(payload["sizes"]),
        labels={int(c): lbl for c, lbl in payload.get("labels", {}).items()},
    )
    if csv_path is not None:
        with open(csv_path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                doc = row["doc_id"]
                model.doc_ids.append(doc)
                model.assignments[doc] = int(row["cluster_id"])
                model.distances[doc] = float(row["distance"])
    return model
