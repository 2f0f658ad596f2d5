"""Lloyd's k-means on dense arrays or sparse ``{index: value}`` vectors.

Minimizes the within-cluster sum of squared Euclidean distances. Each
iteration assigns every point to its nearest centroid (ties to the lowest
cluster index), repairs empty clusters, and moves centroids to the mean of
their members.
"""

from __future__ import annotations

import json
import io
import csv
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

INIT_MODES = ("random", "farthest")


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iterations: int = 100
    tolerance: float = 1e-9
    seed: int = 0
    init: str = "random"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}")


@dataclass
class KMeansModel:
    centroids: np.ndarray  # (k, d)
    assignments: np.ndarray  # (n,) cluster index per point
    objective: float
    iterations_run: int
    converged: bool
    objective_trace: list[float] = field(default_factory=list)
    columns: np.ndarray | None = None  # sparse input: dense column -> original index

    @property
    def k(self) -> int:
        return len(self.centroids)

    def cluster_sizes(self) -> list[int]:
        return np.bincount(self.assignments, minlength=self.k).tolist()

    def members(self, j: int) -> list[int]:
        return np.flatnonzero(self.assignments == j).tolist()

    def centroid_vectors(self) -> list[dict[int, float]]:
        """Centroids as sparse maps in the input's index space, zeros dropped."""
        cols = self.columns if self.columns is not None else np.arange(self.centroids.shape[1])
        return [
            {int(cols[c]): float(row[c]) for c in np.flatnonzero(row)}
            for row in self.centroids
        ]

    def assignments_csv(self, point_ids: Sequence[str] | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["point_id", "cluster_id"])
        for i, j in enumerate(self.assignments.tolist()):
            writer.writerow([point_ids[i] if point_ids is not None else i, j])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "k": self.k,
            "objective": self.objective,
            "iterations_run": self.iterations_run,
            "converged": self.converged,
            "cluster_sizes": self.cluster_sizes(),
            "centroid_norms": [float(np.linalg.norm(c)) for c in self.centroids],
            "objective_trace": list(self.objective_trace),
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2) + "\n"


def densify(points) -> tuple[np.ndarray, np.ndarray | None]:
    """Returns ``(X, columns)``; ``columns`` is None for already-dense input."""
    if isinstance(points, np.ndarray):
        X = np.asarray(points, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        return X, None
    points = list(points)
    if points and isinstance(points[0], Mapping):
        cols = np.array(sorted({i for p in points for i in p}), dtype=int)
        where = {c: j for j, c in enumerate(cols.tolist())}
        X = np.zeros((len(points), len(cols)))
        for r, p in enumerate(points):
            for i, v in p.items():
                X[r, where[i]] = v
        return X, cols
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return X, None


def objective(points, assignments, centroids) -> float:
    """Sum over points of squared distance to their assigned centroid."""
    X, _ = densify(points)
    C = np.asarray(centroids, dtype=float)
    a = np.asarray(assignments, dtype=int)
    if a.shape != (len(X),):
        raise ValueError("one assignment per point required")
    if len(a) and (a.min() < 0 or a.max() >= len(C)):
        raise IndexError("assignment references a nonexistent centroid")
    diff = X - C[a]
    return float(np.sum(diff * diff))


def _sq_distances(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    out = np.empty((len(X), len(C)))
    for j, c in enumerate(C):
        diff = X - c
        out[:, j] = np.einsum("ij,ij->i", diff, diff)
    return out


def _init_indices(X: np.ndarray, k: int, rng: np.random.Generator, mode: str) -> np.ndarray:
    n = len(X)
    if mode == "random":
        return rng.choice(n, size=k, replace=False)
    chosen = [int(rng.integers(n))]
    best = _sq_distances(X, X[chosen])[:, 0]
    for _ in range(1, k):
        best[chosen] = -1.0
        nxt = int(np.argmax(best))
        chosen.append(nxt)
        best = np.minimum(best, _sq_distances(X, X[[nxt]])[:, 0])
    return np.array(chosen)


def _assign(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    k = len(C)
    d = _sq_distances(X, C)
    a = np.argmin(d, axis=1)
    # empty clusters seize the point farthest from its centroid, from a cluster that can spare it
    own = d[np.arange(len(X)), a]
    sizes = np.bincount(a, minlength=k)
    for j in np.flatnonzero(sizes == 0):
        candidates = np.flatnonzero(sizes[a] > 1)
        far = candidates[np.argmax(own[candidates])]
        sizes[a[far]] -= 1
        a[far] = j
        sizes[j] = 1
        own[far] = 0.0
    return a


def _means(X: np.ndarray, a: np.ndarray, k: int) -> np.ndarray:
    C = np.zeros((k, X.shape[1]))
    for j in range(k):
        C[j] = X[a == j].mean(axis=0)
    return C


def cluster(points, config: KMeansConfig) -> KMeansModel:
    X, cols = densify(points)
    n = len(X)
    if n < config.k:
        raise ValueError(f"need at least k={config.k} points, got {n}")
    rng = np.random.default_rng(config.seed)
    C = X[_init_indices(X, config.k, rng, config.init)].copy()

    assignments = None
    trace: list[float] = []
    converged = False
    iterations = 0
    for _ in range(config.max_iterations):
        new_assignments = _assign(X, C)
        if assignments is not None and np.array_equal(new_assignments, assignments):
            converged = True
            break
        assignments = new_assignments
        new_C = _means(X, assignments, config.k)
        shift = float(np.sqrt(np.max(np.sum((new_C - C) ** 2, axis=1))))
        C = new_C
        iterations += 1
        trace.append(objective(X, assignments, C))
        if shift <= config.tolerance:
            converged = True
            break

    return KMeansModel(
        centroids=C,
        assignments=assignments,
        objective=trace[-1],
        iterations_run=iterations,
        converged=converged,
        objective_trace=trace,
        columns=cols,
    )
