"""Local reconstruction weights and their assembly into a sparse row matrix.

Each point is approximated by an affine combination of its neighbors: the
weight vector minimizes the squared reconstruction error subject to the
weights summing to one.  With difference vectors stacked as columns of Z,
the error is a quadratic form in the neighborhood Gram matrix G = Z^T Z and
the constrained minimum has the closed form

    w = G^{-1} 1 / (1^T G^{-1} 1),

with the multiplier of the sum constraint coming out as 2 / (1^T G^{-1} 1).
G is singular whenever the neighbor count exceeds the ambient dimension or
the neighborhood is affinely degenerate, so the solve uses a Tikhonov shift
G + reg_eps * (trace(G)/K) * I.  The shift is relative to trace(G), which
keeps the weights invariant under uniform rescaling of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg.lapack import dpocon
from scipy.sparse import csr_matrix

from .datasets import DataMatrix
from .errors import DegenerateNeighborhoodError, ParameterError
from .jsonio import format_float
from .neighbors import NeighborGraph

__all__ = [
    "LocalSystem",
    "LocalWeights",
    "WeightMatrix",
    "build_local_system",
    "solve_local_weights",
    "assemble_weight_matrix",
    "write_weight_coo",
]

# Fraction by which regularization may inflate a local objective before the
# point is counted as materially affected (surfaced in run reports).
REG_IMPACT_THRESHOLD = 0.01


@dataclass(frozen=True)
class LocalSystem:
    """Difference matrix and Gram matrix of one neighborhood.

    `z` holds the difference vectors (center minus neighbor) as its
    columns, ordered like the neighbor-graph row; `gram` = z.T @ z.
    `neighbor_indices` records which point each column refers to.
    """

    center: int
    z: np.ndarray
    gram: np.ndarray
    reg_eps: float
    neighbor_indices: np.ndarray

    def __post_init__(self):
        if self.reg_eps < 0:
            raise ParameterError(f"reg_eps must be nonnegative, got {self.reg_eps}")
        g = np.asarray(self.gram, dtype=float)
        scale = np.abs(g).max() if g.size else 0.0
        if np.abs(g - g.T).max(initial=0.0) > 1e-12 * max(1.0, scale):
            raise ParameterError(f"gram matrix of point {self.center} is not symmetric")

    @property
    def k(self) -> int:
        return self.gram.shape[0]

    def regularized_gram(self) -> np.ndarray:
        """Gram matrix with the relative Tikhonov shift applied.

        Falls back to an absolute shift when trace(G) = 0 (all neighbors
        coincide with the center), which yields uniform weights.
        """
        g = self.gram
        k = self.k
        tr = float(np.trace(g))
        shift = self.reg_eps * (tr / k) if tr > 0.0 else self.reg_eps
        ghat = g.copy()
        ghat[np.diag_indices(k)] += shift
        return ghat


@dataclass(frozen=True)
class LocalWeights:
    """Solved reconstruction weights for one point.

    Weights sum to one; negative entries are legal.  `lagrange` is the
    multiplier of the sum constraint, kept as a diagnostic.
    """

    center: int
    weights: np.ndarray
    lagrange: float
    neighbor_indices: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if not np.all(np.isfinite(w)):
            raise DegenerateNeighborhoodError(
                f"non-finite weights for point {self.center}", point=self.center
            )
        if abs(w.sum() - 1.0) > 1e-10:
            raise DegenerateNeighborhoodError(
                f"weights for point {self.center} sum to {w.sum()!r}, expected 1",
                point=self.center,
            )


@dataclass(frozen=True)
class WeightMatrix:
    """Sparse n x n reconstruction-weight matrix, exactly k entries per row.

    Row i carries the solved weights of point i scattered to its neighbor
    columns; the diagonal and all non-neighbor columns are structurally
    zero, and every row sums to 1.  `reg_impact_count` counts points whose
    objective the Tikhonov shift changed by more than REG_IMPACT_THRESHOLD.
    """

    n: int
    k: int
    indices: np.ndarray
    values: np.ndarray
    reg_impact_count: int = 0

    def __post_init__(self):
        idx = np.asarray(self.indices)
        val = np.asarray(self.values, dtype=float)
        if idx.shape != (self.n, self.k) or val.shape != (self.n, self.k):
            raise ParameterError(
                f"indices/values must be {self.n} x {self.k}, got {idx.shape} and {val.shape}"
            )
        object.__setattr__(self, "indices", idx.astype(np.int64))
        object.__setattr__(self, "values", val)

    def row_sums(self) -> np.ndarray:
        return self.values.sum(axis=1)

    def max_row_sum_dev(self) -> float:
        return float(np.abs(self.row_sums() - 1.0).max())

    def to_csr(self) -> csr_matrix:
        indptr = np.arange(0, (self.n + 1) * self.k, self.k)
        m = csr_matrix(
            (self.values.ravel().copy(), self.indices.ravel().copy(), indptr),
            shape=(self.n, self.n),
        )
        m.sort_indices()
        return m

    def toarray(self) -> np.ndarray:
        w = np.zeros((self.n, self.n))
        np.put_along_axis(w, self.indices, self.values, axis=1)
        return w

    def apply(self, y: np.ndarray) -> np.ndarray:
        """W @ y computed from the per-row representation."""
        y = np.atleast_2d(np.asarray(y, dtype=float))
        return np.einsum("nk,nkp->np", self.values, y[self.indices])


def build_local_system(data: DataMatrix, graph: NeighborGraph, i: int, reg_eps: float) -> LocalSystem:
    """Difference and Gram matrices for point i's neighborhood."""
    if not 0 <= i < data.n:
        raise ParameterError(f"point index {i} out of range [0, {data.n})")
    nbr = graph.indices[i]
    z = (data.points[i][None, :] - data.points[nbr]).T  # D x K, columns in graph order
    gram = z.T @ z
    return LocalSystem(center=i, z=z, gram=gram, reg_eps=reg_eps, neighbor_indices=nbr.copy())


def solve_local_weights(system: LocalSystem) -> LocalWeights:
    """Minimize the reconstruction quadratic over the sum-to-one plane.

    Solves the regularized Gram system by Cholesky factorization rather
    than explicit inversion.  Raises DegenerateNeighborhoodError when the
    matrix is numerically singular even after the shift (reciprocal
    condition estimate below machine epsilon).
    """
    ghat = system.regularized_gram()
    k = system.k
    anorm = float(np.abs(ghat).sum(axis=0).max())
    try:
        chol, low = sla.cho_factor(ghat, lower=True)
    except sla.LinAlgError as exc:
        raise DegenerateNeighborhoodError(
            f"point {system.center}: neighborhood Gram matrix not positive definite "
            f"after regularization (reg_eps={system.reg_eps})",
            point=system.center,
        ) from exc
    rcond, info = dpocon(chol, anorm, lower=1)
    if info != 0 or rcond < np.finfo(float).eps:
        raise DegenerateNeighborhoodError(
            f"point {system.center}: neighborhood system condition estimate "
            f"{0.0 if rcond == 0 else 1.0 / rcond:.3e} exceeds 1/machine-eps",
            point=system.center,
        )
    raw = sla.cho_solve((chol, low), np.ones(k))
    total = float(raw.sum())
    weights = raw / total
    lagrange = 2.0 / total
    return LocalWeights(
        center=system.center,
        weights=weights,
        lagrange=lagrange,
        neighbor_indices=np.asarray(system.neighbor_indices, dtype=np.int64),
    )


def assemble_weight_matrix(data: DataMatrix, graph: NeighborGraph, reg_eps: float = 1e-3) -> WeightMatrix:
    """Solve every local system and scatter the weights into a sparse matrix."""
    if graph.n != data.n:
        raise ParameterError(f"graph has {graph.n} rows but data has {data.n} points")
    n, k = data.n, graph.k
    values = np.empty((n, k))
    flagged = 0
    for i in range(n):
        system = build_local_system(data, graph, i, reg_eps)
        lw = solve_local_weights(system)
        values[i] = lw.weights
        # Objective with / without the shift; large relative gaps mean the
        # regularization, not the data, shaped this row.
        obj_reg = lw.lagrange / 2.0
        obj_raw = float(lw.weights @ system.gram @ lw.weights)
        if obj_reg > 0.0 and (obj_reg - obj_raw) / obj_reg > REG_IMPACT_THRESHOLD:
            flagged += 1
    return WeightMatrix(
        n=n, k=k, indices=graph.indices.copy(), values=values, reg_impact_count=flagged
    )


def write_weight_coo(w: WeightMatrix, path) -> None:
    """Dump W to a coordinate-list text file (row col value), diff-friendly."""
    lines = []
    for i in range(w.n):
        order = np.argsort(w.indices[i], kind="stable")
        for j in order:
            lines.append(f"{i} {w.indices[i, j]} {format_float(w.values[i, j])}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
