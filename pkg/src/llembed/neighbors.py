"""Exact k-nearest-neighbor graphs under configurable metrics.

Brute-force O(n^2) search defines the semantics here: neighborhoods feed a
local least-squares fit, so an approximate index returning a different
neighbor set would silently change the model.  Ties at equal distance go to
the lower point index, making graphs reproducible across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial.distance import cdist

from .datasets import DataMatrix
from .errors import ParameterError

__all__ = [
    "MetricKind",
    "NeighborGraph",
    "pairwise_distance",
    "knn_graph",
    "epsilon_ball_neighbors",
]

# Rows are processed in blocks so the full n x n distance matrix never has
# to be materialized for larger inputs.
_BLOCK_ROWS = 512


class MetricKind(str, Enum):
    EUCLIDEAN = "euclidean"
    MANHATTAN = "manhattan"
    COSINE = "cosine"


_CDIST_NAME = {
    MetricKind.EUCLIDEAN: "euclidean",
    MetricKind.MANHATTAN: "cityblock",
    MetricKind.COSINE: "cosine",
}


@dataclass(frozen=True)
class NeighborGraph:
    """Per-point neighbor lists: row i holds the k nearest points to i.

    `indices` and `distances` are n x k; distances ascend within each row,
    no row contains its own point, and indices within a row are distinct.
    """

    k: int
    indices: np.ndarray
    distances: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices)
        dist = np.asarray(self.distances, dtype=float)
        if idx.shape != dist.shape or idx.ndim != 2 or idx.shape[1] != self.k:
            raise ParameterError(
                f"indices/distances must both be n x k={self.k}, got {idx.shape} and {dist.shape}"
            )
        object.__setattr__(self, "indices", idx.astype(np.int64))
        object.__setattr__(self, "distances", dist)

    @property
    def n(self) -> int:
        return self.indices.shape[0]

    def validate(self) -> None:
        n = self.n
        rows = np.arange(n)[:, None]
        if np.any(self.indices == rows):
            raise ParameterError("a point appears in its own neighbor list")
        if np.any(self.indices < 0) or np.any(self.indices >= n):
            raise ParameterError("neighbor index out of range")
        if np.any(np.diff(self.distances, axis=1) < 0):
            raise ParameterError("neighbor distances are not sorted ascending")
        for i in range(n):
            if len(set(self.indices[i].tolist())) != self.k:
                raise ParameterError(f"row {i} has repeated neighbor indices")


def _check_cosine_ok(pts: np.ndarray) -> None:
    norms = np.linalg.norm(pts, axis=1)
    bad = np.nonzero(norms == 0.0)[0]
    if bad.size:
        raise ParameterError(f"cosine distance undefined for zero vector (point {bad[0]})")


def pairwise_distance(a, b, metric: MetricKind = MetricKind.EUCLIDEAN) -> float:
    """Distance between two points under the chosen metric.

    Cosine distance is 1 - cos(angle), in [0, 2]; it requires both vectors
    to be nonzero.
    """
    metric = MetricKind(metric)
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise ParameterError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    if metric is MetricKind.EUCLIDEAN:
        return float(np.sqrt(np.sum((a - b) ** 2)))
    if metric is MetricKind.MANHATTAN:
        return float(np.sum(np.abs(a - b)))
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ParameterError("cosine distance undefined for zero vector")
    return float(1.0 - np.dot(a, b) / (na * nb))


def _neighbor_block(pts, metric_name, lo, hi, width):
    """Nearest `width` columns for rows [lo, hi), self excluded, ties by index."""
    block = cdist(pts[lo:hi], pts, metric=metric_name)
    for r in range(hi - lo):
        block[r, lo + r] = np.inf
    # Stable sort on distance keeps equal-distance candidates in index
    # order, which is the documented tie-break.
    order = np.argsort(block, axis=1, kind="stable")[:, :width]
    dists = np.take_along_axis(block, order, axis=1)
    return order, dists


def knn_graph(data: DataMatrix, k: int, metric: MetricKind = MetricKind.EUCLIDEAN) -> NeighborGraph:
    """Exact k-nearest-neighbor graph of the dataset.

    Row i of the result lists the k points closest to point i (itself
    excluded), sorted by ascending distance with index tie-break.
    """
    metric = MetricKind(metric)
    n = data.n
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k must satisfy 1 <= k <= n-1 = {n - 1}, got {k}")
    pts = data.points
    if metric is MetricKind.COSINE:
        _check_cosine_ok(pts)
    name = _CDIST_NAME[metric]
    indices = np.empty((n, k), dtype=np.int64)
    distances = np.empty((n, k))
    for lo in range(0, n, _BLOCK_ROWS):
        hi = min(lo + _BLOCK_ROWS, n)
        order, dists = _neighbor_block(pts, name, lo, hi, k)
        indices[lo:hi] = order
        distances[lo:hi] = dists
    return NeighborGraph(k, indices, distances)


def epsilon_ball_neighbors(
    data: DataMatrix,
    eps: float,
    k_max: int,
    metric: MetricKind = MetricKind.EUCLIDEAN,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Neighbors within radius eps, clipped per point to between 1 and k_max.

    An alternative selection rule to fixed-k: each point keeps every other
    point at distance <= eps, but never fewer than its single nearest
    neighbor and never more than the k_max closest.  Rows have varying
    lengths, so the result is a list of (indices, distances) pairs rather
    than a NeighborGraph.
    """
    metric = MetricKind(metric)
    if not eps >= 0:
        raise ParameterError(f"eps must be nonnegative, got {eps}")
    n = data.n
    if not 1 <= k_max <= n - 1:
        raise ParameterError(f"k_max must satisfy 1 <= k_max <= n-1 = {n - 1}, got {k_max}")
    pts = data.points
    if metric is MetricKind.COSINE:
        _check_cosine_ok(pts)
    name = _CDIST_NAME[metric]
    result = []
    for lo in range(0, n, _BLOCK_ROWS):
        hi = min(lo + _BLOCK_ROWS, n)
        order, dists = _neighbor_block(pts, name, lo, hi, n - 1)
        for r in range(hi - lo):
            within = int(np.searchsorted(dists[r], eps, side="right"))
            take = min(max(within, 1), k_max)
            result.append((order[r, :take].copy(), dists[r, :take].copy()))
    return result
