"""Nonlinear dimensionality reduction by locally linear reconstruction.

The library embeds high-dimensional point sets into a few coordinates by
(1) finding each point's nearest neighbors, (2) solving for the affine
weights that best reconstruct each point from its neighbors, and
(3) choosing low-dimensional coordinates that preserve those weights via a
sparse symmetric eigenproblem.  A PCA baseline, synthetic benchmark
manifolds, and rank-based quality metrics round out the toolkit, along
with a batch CLI (`llembed`).
"""

from .datasets import (
    DataMatrix,
    ManifoldSample,
    generate_punctured_sphere,
    generate_spiral,
    generate_swiss_roll,
    load_csv,
    save_matrix,
)
from .errors import (
    DegenerateNeighborhoodError,
    EigensolverError,
    FormatError,
    LlembedError,
    ParameterError,
    UndefinedCorrelationError,
)
from .evaluation import (
    PcaModel,
    QualityReport,
    continuity,
    neighbor_overlap,
    pca_fit,
    pca_transform,
    quality_report,
    spearman_intrinsic,
    trustworthiness,
)
from .local_weights import (
    LocalSystem,
    LocalWeights,
    WeightMatrix,
    assemble_weight_matrix,
    build_local_system,
    solve_local_weights,
    write_weight_coo,
)
from .neighbors import (
    MetricKind,
    NeighborGraph,
    epsilon_ball_neighbors,
    knn_graph,
    pairwise_distance,
)
from .spectral_embedding import (
    AlignmentMatrix,
    Embedding,
    LleConfig,
    build_alignment_matrix,
    embedding_cost,
    lle_fit,
    select_embedding,
    smallest_eigenpairs,
)

__version__ = "0.1.0"

__all__ = [
    "DataMatrix",
    "ManifoldSample",
    "generate_punctured_sphere",
    "generate_spiral",
    "generate_swiss_roll",
    "load_csv",
    "save_matrix",
    "LlembedError",
    "ParameterError",
    "FormatError",
    "DegenerateNeighborhoodError",
    "EigensolverError",
    "UndefinedCorrelationError",
    "MetricKind",
    "NeighborGraph",
    "pairwise_distance",
    "knn_graph",
    "epsilon_ball_neighbors",
    "LocalSystem",
    "LocalWeights",
    "WeightMatrix",
    "build_local_system",
    "solve_local_weights",
    "assemble_weight_matrix",
    "write_weight_coo",
    "AlignmentMatrix",
    "Embedding",
    "LleConfig",
    "build_alignment_matrix",
    "smallest_eigenpairs",
    "select_embedding",
    "lle_fit",
    "embedding_cost",
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
