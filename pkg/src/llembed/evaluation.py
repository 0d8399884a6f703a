"""PCA baseline and embedding-quality metrics.

The rank-based scores follow the usual trustworthiness/continuity
definitions: trustworthiness penalizes points that intrude into a
low-dimensional neighborhood without being close in the original space,
continuity penalizes original neighbors that the embedding pushes away.
Both live in [0, 1], are invariant under rigid motions and uniform scaling
of either space, and break distance ties by point index so results are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist
from scipy.stats import rankdata

from .datasets import DataMatrix
from .errors import ParameterError, UndefinedCorrelationError
from .local_weights import WeightMatrix, assemble_weight_matrix
from .neighbors import MetricKind, knn_graph
from .spectral_embedding import embedding_cost

__all__ = [
    "PcaModel",
    "QualityReport",
    "pca_fit",
    "pca_transform",
    "trustworthiness",
    "continuity",
    "neighbor_overlap",
    "spearman_intrinsic",
    "quality_report",
]


def _as_points(x) -> np.ndarray:
    pts = x.points if isinstance(x, DataMatrix) else np.asarray(x, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return pts


@dataclass(frozen=True)
class PcaModel:
    """Mean and top principal directions of a dataset.

    `components` rows are orthonormal; `explained_variance` is the sample
    variance (n-1 divisor) along each component, descending.
    """

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray

    @property
    def p(self) -> int:
        return self.components.shape[0]

    def validate(self) -> None:
        gram_dev = np.abs(self.components @ self.components.T - np.eye(self.p)).max()
        if gram_dev > 1e-8:
            raise ParameterError(f"components not orthonormal (deviation {gram_dev:.3e})")
        ev = self.explained_variance
        if np.any(ev < 0) or np.any(np.diff(ev) > 0):
            raise ParameterError("explained variances must be nonnegative and descending")


def _fix_row_signs(rows: np.ndarray) -> np.ndarray:
    out = rows.copy()
    for i in range(out.shape[0]):
        lead = np.argmax(np.abs(out[i]))
        if out[i, lead] < 0:
            out[i] = -out[i]
    return out


def pca_fit(data: DataMatrix, p: int) -> PcaModel:
    """Top-p eigenvectors of the sample covariance of mean-centered data."""
    n, d = data.n, data.d
    if not 1 <= p <= min(n - 1, d):
        raise ParameterError(f"p must satisfy 1 <= p <= min(n-1, D) = {min(n - 1, d)}, got {p}")
    mean = data.points.mean(axis=0)
    centered = data.points - mean
    cov = centered.T @ centered / (n - 1)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals, kind="stable")[::-1][:p]
    components = _fix_row_signs(vecs[:, order].T)
    explained = np.maximum(vals[order], 0.0)
    model = PcaModel(mean=mean, components=components, explained_variance=explained)
    model.validate()
    return model


def pca_transform(model: PcaModel, data) -> np.ndarray:
    """Project points onto the model's components: (x - mean) @ components.T."""
    pts = _as_points(data)
    if pts.shape[1] != model.mean.shape[0]:
        raise ParameterError(
            f"data has {pts.shape[1]} dimensions, model was fit on {model.mean.shape[0]}"
        )
    return (pts - model.mean) @ model.components.T


def _rank_and_neighbors(pts: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Full rank matrix (rank[i, j] = position of j by distance from i,
    1-based, ties by index) and the index sets of the k nearest."""
    n = pts.shape[0]
    dist = cdist(pts, pts, metric="euclidean")
    np.fill_diagonal(dist, np.inf)
    order = np.argsort(dist, axis=1, kind="stable")
    rank = np.empty((n, n), dtype=np.int64)
    positions = np.arange(1, n + 1)
    for i in range(n):
        rank[i, order[i]] = positions
    return rank, order[:, :k]


def _check_metric_inputs(high, low, k) -> tuple[np.ndarray, np.ndarray]:
    h = _as_points(high)
    l = _as_points(low)
    if h.shape[0] != l.shape[0]:
        raise ParameterError(f"row counts differ: {h.shape[0]} vs {l.shape[0]}")
    n = h.shape[0]
    if not 1 <= k < n / 2:
        raise ParameterError(f"k must satisfy 1 <= k < n/2 = {n / 2}, got {k}")
    return h, l


def trustworthiness(high, low, k: int) -> float:
    """Penalty-based score in [0, 1] for intruders in embedded neighborhoods.

    For every point, embedding neighbors that are not among its k nearest
    in the original space contribute their original-space rank excess; a
    score of 1 means no intruders at all.
    """
    h, l = _check_metric_inputs(high, low, k)
    n = h.shape[0]
    rank_high, nn_high = _rank_and_neighbors(h, k)
    _, nn_low = _rank_and_neighbors(l, k)
    total = 0
    for i in range(n):
        intruders = np.setdiff1d(nn_low[i], nn_high[i], assume_unique=True)
        total += int(np.sum(rank_high[i, intruders] - k))
    return 1.0 - 2.0 * total / (n * k * (2 * n - 3 * k - 1))


def continuity(high, low, k: int) -> float:
    """Dual of trustworthiness: penalizes original neighbors lost in the embedding."""
    return trustworthiness(low, high, k)


def neighbor_overlap(high, low, k: int) -> float:
    """Mean Jaccard overlap between the k-neighborhoods before and after embedding."""
    h, l = _check_metric_inputs(high, low, k)
    n = h.shape[0]
    _, nn_high = _rank_and_neighbors(h, k)
    _, nn_low = _rank_and_neighbors(l, k)
    total = 0.0
    for i in range(n):
        shared = np.intersect1d(nn_high[i], nn_low[i], assume_unique=True).size
        total += shared / (2 * k - shared)
    return total / n


def spearman_intrinsic(embedding_col, intrinsic_col) -> float:
    """Spearman rank correlation between a 1-D embedding and a ground-truth parameter.

    Ties get average ranks.  Raises UndefinedCorrelationError when either
    sequence is constant.
    """
    a = np.asarray(embedding_col, dtype=float).ravel()
    b = np.asarray(intrinsic_col, dtype=float).ravel()
    if a.shape != b.shape:
        raise ParameterError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] < 3:
        raise ParameterError(f"need at least 3 values, got {a.shape[0]}")
    ra = rankdata(a, method="average")
    rb = rankdata(b, method="average")
    sa, sb = ra.std(), rb.std()
    if sa == 0.0 or sb == 0.0:
        raise UndefinedCorrelationError("rank correlation undefined for constant input")
    return float(np.mean((ra - ra.mean()) * (rb - rb.mean())) / (sa * sb))


@dataclass(frozen=True)
class QualityReport:
    """Aggregated embedding-quality scores for one (data, embedding) pair."""

    phi: float
    trustworthiness: float
    continuity: float
    neighbor_overlap: float
    spearman_intrinsic: float | None = None

    def __post_init__(self):
        if self.phi < 0:
            raise ParameterError(f"phi must be nonnegative, got {self.phi}")
        for name in ("trustworthiness", "continuity", "neighbor_overlap"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ParameterError(f"{name}={v} outside [0, 1]")
        s = self.spearman_intrinsic
        if s is not None and not -1.0 <= s <= 1.0:
            raise ParameterError(f"spearman_intrinsic={s} outside [-1, 1]")

    def as_dict(self) -> dict:
        return {
            "phi": self.phi,
            "trustworthiness": self.trustworthiness,
            "continuity": self.continuity,
            "neighbor_overlap": self.neighbor_overlap,
            "spearman_intrinsic": self.spearman_intrinsic,
        }


def quality_report(
    high,
    low,
    k: int,
    intrinsic=None,
    reg_eps: float = 1e-3,
    metric: MetricKind = MetricKind.EUCLIDEAN,
    weights: WeightMatrix | None = None,
) -> QualityReport:
    """All quality metrics of an embedding against its source data.

    The reconstruction cost uses the weight matrix of the original data
    (pass `weights` to reuse one already assembled).  Spearman correlation
    against ground truth is reported as an absolute value, and only when
    both the embedding and the intrinsic parameters are one-dimensional:
    eigenvector sign makes the raw sign arbitrary.
    """
    h, l = _check_metric_inputs(high, low, k)
    data = high if isinstance(high, DataMatrix) else DataMatrix(h)
    if weights is None:
        weights = assemble_weight_matrix(data, knn_graph(data, k, metric), reg_eps)
    elif weights.n != h.shape[0]:
        raise ParameterError(f"weight matrix is {weights.n} x {weights.n}, data has {h.shape[0]} rows")
    phi = embedding_cost(l, weights)
    spearman = None
    if intrinsic is not None:
        intr = _as_points(intrinsic)
        if intr.shape[0] != h.shape[0]:
            raise ParameterError(f"intrinsic rows ({intr.shape[0]}) must match data ({h.shape[0]})")
        if intr.shape[1] == 1 and l.shape[1] == 1:
            spearman = abs(spearman_intrinsic(l[:, 0], intr[:, 0]))
    return QualityReport(
        phi=phi,
        trustworthiness=trustworthiness(h, l, k),
        continuity=continuity(h, l, k),
        neighbor_overlap=neighbor_overlap(h, l, k),
        spearman_intrinsic=spearman,
    )
