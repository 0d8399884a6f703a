"""Embedding stage: alignment matrix, bottom eigenpairs, coordinate selection.

The embedding cost sum_i ||y_i - sum_j w_ij y_j||^2 is the quadratic form
Y^T M Y with M = (I - W)^T (I - W), so the constrained minimizers are the
eigenvectors of M with the smallest eigenvalues.  Because every row of W
sums to one, M annihilates the constant vector; that zero-eigenvalue pair
carries no coordinate information and is dropped, and the next P
eigenvectors (scaled by sqrt(n) so the embedding has unit covariance)
become the P-dimensional coordinates.
"""

from __future__ import annotations

import contextlib
import time
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh
from threadpoolctl import threadpool_limits

from .datasets import DataMatrix
from .errors import EigensolverError, LlembedError, ParameterError
from .local_weights import WeightMatrix, assemble_weight_matrix
from .neighbors import MetricKind, knn_graph
from .rng import Xoshiro256PlusPlus

__all__ = [
    "AlignmentMatrix",
    "Embedding",
    "LleConfig",
    "build_alignment_matrix",
    "smallest_eigenpairs",
    "select_embedding",
    "lle_fit",
    "embedding_cost",
]

# Above this size the dense symmetric solver gives way to shift-invert
# Lanczos; both are held to the same residual contract.
DENSE_EIGENSOLVER_CUTOFF = 2000

_CONSTANT_COSINE_TOL = 1e-6


@dataclass(frozen=True)
class LleConfig:
    """Parameters of one embedding run."""

    k: int
    p: int
    metric: MetricKind = MetricKind.EUCLIDEAN
    reg_eps: float = 1e-3
    eig_tol: float = 1e-8
    zero_tol: float | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "metric", MetricKind(self.metric))
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if self.p < 1:
            raise ParameterError(f"p must be >= 1, got {self.p}")
        if self.reg_eps < 0:
            raise ParameterError(f"reg_eps must be nonnegative, got {self.reg_eps}")
        if not self.eig_tol > 0:
            raise ParameterError(f"eig_tol must be positive, got {self.eig_tol}")
        if self.zero_tol is not None and self.zero_tol < 0:
            raise ParameterError(f"zero_tol must be nonnegative, got {self.zero_tol}")

    def validate_for(self, data: DataMatrix) -> None:
        n = data.n
        if self.k > n - 1:
            raise ParameterError(f"k={self.k} requires at least k+1={self.k + 1} points, got n={n}")
        if self.p >= n:
            raise ParameterError(f"target dimension p={self.p} must be < n={n}")


@dataclass(frozen=True)
class AlignmentMatrix:
    """Sparse symmetric PSD matrix (I - W)^T (I - W)."""

    n: int
    m: sp.csr_matrix

    def validate(self) -> None:
        dev = np.abs((self.m - self.m.T)).max() if self.m.nnz else 0.0
        if dev > 1e-12 * max(1.0, abs(self.m).max()):
            raise ParameterError(f"alignment matrix asymmetry {dev:.3e}")
        ones_residual = np.abs(self.m @ np.ones(self.n)).max()
        if ones_residual > 1e-10 * self.n:
            raise ParameterError(
                f"alignment matrix does not annihilate the constant vector "
                f"(residual {ones_residual:.3e})"
            )

    def norm_bound(self) -> float:
        """Infinity norm: cheap upper bound on the largest eigenvalue."""
        return float(np.abs(self.m).sum(axis=1).max()) if self.m.nnz else 0.0


@dataclass(frozen=True)
class Embedding:
    """Low-dimensional coordinates with their eigenvalue spectrum.

    Columns of `y` are sqrt(n)-scaled eigenvectors, so the embedding is
    centered with identity covariance (checked by `validate`).  `warnings`
    records degeneracy diagnostics from the selection step.
    """

    y: np.ndarray
    eigenvalues: np.ndarray
    dropped_eigenvalue: float
    config: LleConfig | None = None
    warnings: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.y.shape[1]

    def validate(self) -> None:
        n, p = self.y.shape
        vals = np.asarray(self.eigenvalues, dtype=float)
        if vals.shape != (p,):
            raise ParameterError(f"expected {p} eigenvalues, got {vals.shape}")
        if np.any(vals < 0) or np.any(np.diff(vals) < 0):
            raise ParameterError("eigenvalues must be nonnegative and ascending")
        col_means = np.abs(self.y.mean(axis=0)).max()
        if col_means > 1e-8:
            raise ParameterError(f"embedding columns not centered (max mean {col_means:.3e})")
        cov_dev = np.abs(self.y.T @ self.y / n - np.eye(p)).max()
        if cov_dev > 1e-6:
            raise ParameterError(f"embedding covariance deviates from identity by {cov_dev:.3e}")


def build_alignment_matrix(w: WeightMatrix) -> AlignmentMatrix:
    """Form (I - W)^T (I - W) in sparse storage."""
    a = sp.eye(w.n, format="csr") - w.to_csr()
    m = (a.T @ a).tocsr()
    # The product is symmetric in exact arithmetic; averaging removes the
    # last-ulp asymmetry from differing summation orders.
    m = ((m + m.T) * 0.5).tocsr()
    m.sort_indices()
    out = AlignmentMatrix(n=w.n, m=m)
    out.validate()
    return out


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry of each is positive."""
    out = vecs.copy()
    for j in range(out.shape[1]):
        lead = np.argmax(np.abs(out[:, j]))
        if out[lead, j] < 0:
            out[:, j] = -out[:, j]
    return out


def smallest_eigenpairs(
    m: AlignmentMatrix,
    count: int,
    eig_tol: float = 1e-8,
    seed: int = 0,
    dense_cutoff: int = DENSE_EIGENSOLVER_CUTOFF,
) -> tuple[np.ndarray, np.ndarray]:
    """The `count` algebraically smallest eigenpairs of M, ascending.

    Dense symmetric decomposition up to `dense_cutoff` points, shift-invert
    Lanczos beyond.  Every returned pair is verified against the residual
    contract ||Mv - lambda v|| <= eig_tol * max(1, ||M||); failures raise
    EigensolverError with the achieved residual.  Eigenvectors come back
    unit-norm with a deterministic sign.
    """
    n = m.n
    if not 1 <= count <= n:
        raise ParameterError(f"count must satisfy 1 <= count <= n={n}, got {count}")
    norm_bound = m.norm_bound()
    if n <= dense_cutoff or count >= n - 1:
        dense = m.m.toarray()
        # Pinned to one BLAS thread: LAPACK reductions must not depend on
        # the machine's thread count for outputs to be reproducible.
        with threadpool_limits(limits=1):
            vals, vecs = sla.eigh(dense, subset_by_index=(0, count - 1))
    else:
        rng = Xoshiro256PlusPlus(seed)
        v0 = np.array([rng.uniform(-1.0, 1.0) for _ in range(n)])
        sigma = -1e-3 * max(1.0, norm_bound)
        try:
            with threadpool_limits(limits=1):
                vals, vecs = eigsh(m.m, k=count, sigma=sigma, which="LM", v0=v0)
        except (ArpackNoConvergence, ArpackError) as exc:
            raise EigensolverError(f"iterative eigensolver failed to converge: {exc}") from exc
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    scale = max(1.0, norm_bound)
    if vals[0] < -1e-10 * scale:
        raise EigensolverError(
            f"alignment matrix not positive semidefinite: eigenvalue {vals[0]:.3e}"
        )
    residuals = np.linalg.norm(m.m @ vecs - vecs * vals[None, :], axis=0)
    worst = float(residuals.max())
    if worst > eig_tol * scale:
        raise EigensolverError(
            f"eigenpair residual {worst:.3e} exceeds tolerance {eig_tol * scale:.3e}",
            residual=worst,
        )
    ortho_dev = float(np.abs(vecs.T @ vecs - np.eye(count)).max())
    if ortho_dev > 1e-8:
        raise EigensolverError(
            f"eigenvectors not orthonormal (deviation {ortho_dev:.3e})", residual=ortho_dev
        )
    vals = np.maximum(vals, 0.0)
    return vals, _fix_signs(vecs)


def select_embedding(
    eigenpairs: tuple[np.ndarray, np.ndarray],
    p: int,
    n: int,
    zero_tol: float | None = None,
    config: LleConfig | None = None,
) -> Embedding:
    """Drop the trivial bottom eigenvector and scale the next p into coordinates.

    The discarded smallest-eigenvalue vector is checked to be (nearly)
    constant.  If the second-smallest eigenvalue also sits below `zero_tol`
    the spectrum is degenerate (disconnected neighborhood graph); this is
    reported as a warning, not an error, and the near-constancy check is
    waived because the bottom eigenspace is then not unique.
    """
    vals, vecs = eigenpairs
    vals = np.asarray(vals, dtype=float)
    vecs = np.asarray(vecs, dtype=float)
    if vals.shape[0] < p + 1 or vecs.shape[1] < p + 1:
        raise ParameterError(f"need at least p+1={p + 1} eigenpairs, got {vals.shape[0]}")
    if vecs.shape[0] != n:
        raise ParameterError(f"eigenvectors have {vecs.shape[0]} rows, expected n={n}")
    if zero_tol is None:
        zero_tol = 1e-9 * (float(vals.max()) + 1.0)
    warnings = []
    degenerate = vals[1] < zero_tol
    if degenerate:
        warnings.append(
            f"degenerate spectrum: second-smallest eigenvalue {vals[1]:.6e} < "
            f"zero_tol {zero_tol:.6e}; neighborhood graph is likely disconnected "
            f"and the embedding is determined only up to mixing within the null space"
        )
    unit = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
    constant_cosine = abs(unit.sum()) / np.sqrt(n)
    if constant_cosine < 1.0 - _CONSTANT_COSINE_TOL:
        if degenerate:
            warnings.append(
                f"dropped eigenvector is not the constant vector (cosine "
                f"{constant_cosine:.9f}); constant direction is mixed into the "
                f"degenerate null space"
            )
        else:
            raise EigensolverError(
                f"smallest eigenvector deviates from the constant vector "
                f"(cosine {constant_cosine:.9f}) despite a simple zero eigenvalue"
            )
    y = vecs[:, 1 : p + 1] * np.sqrt(n)
    emb = Embedding(
        y=y,
        eigenvalues=vals[1 : p + 1].copy(),
        dropped_eigenvalue=float(vals[0]),
        config=config,
        warnings=tuple(warnings),
    )
    if not degenerate:
        emb.validate()
    return emb


def embedding_cost(y: np.ndarray, w: WeightMatrix) -> float:
    """Reconstruction cost sum_i ||y_i - sum_j w_ij y_j||^2, from the sum itself."""
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    if y.shape[0] != w.n:
        raise ParameterError(f"y has {y.shape[0]} rows but W is {w.n} x {w.n}")
    residual = y - w.apply(y)
    return float(np.sum(residual * residual))


@contextlib.contextmanager
def _stage(name: str, timings: dict | None):
    start = time.perf_counter()
    try:
        yield
    except LlembedError as exc:
        exc.stage = name
        raise
    finally:
        if timings is not None:
            timings[name] = time.perf_counter() - start


def lle_fit(
    data: DataMatrix,
    config: LleConfig,
    timings: dict | None = None,
) -> tuple[Embedding, WeightMatrix, AlignmentMatrix]:
    """Run the full pipeline: neighbors, weights, alignment, eigensolve, select.

    Deterministic for fixed (data, config).  Component errors propagate
    with their pipeline stage recorded on the exception's `stage`
    attribute.  Pass a dict as `timings` to collect per-stage seconds.
    """
    config.validate_for(data)
    with _stage("neighbors", timings):
        graph = knn_graph(data, config.k, config.metric)
    with _stage("weights", timings):
        w = assemble_weight_matrix(data, graph, config.reg_eps)
    with _stage("alignment", timings):
        m = build_alignment_matrix(w)
    with _stage("eigensolve", timings):
        vals, vecs = smallest_eigenpairs(m, config.p + 1, eig_tol=config.eig_tol, seed=config.seed)
    with _stage("select", timings):
        zero_tol = config.zero_tol
        if zero_tol is None:
            zero_tol = 1e-9 * (m.norm_bound() + 1.0)
        embedding = select_embedding((vals, vecs), config.p, data.n, zero_tol, config=config)
    return embedding, w, m
