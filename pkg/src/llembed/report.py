"""Run-report construction and the JSON schemas the CLI guarantees.

Reports carry everything needed to audit a run: the configuration echo,
the eigenvalue spectrum, the reconstruction cost, and any warnings.  Wall
times live in a separate timing file so the analytical outputs of two
identical invocations stay byte-identical.
"""

from __future__ import annotations

from .evaluation import QualityReport
from .spectral_embedding import Embedding, LleConfig

SCHEMA_VERSION = 1

_CONFIG_SCHEMA = {
    "type": "object",
    "required": ["k", "p", "metric", "reg_eps", "eig_tol", "zero_tol", "seed"],
    "additionalProperties": False,
    "properties": {
        "k": {"type": "integer", "minimum": 1},
        "p": {"type": "integer", "minimum": 1},
        "metric": {"enum": ["euclidean", "manhattan", "cosine"]},
        "reg_eps": {"type": "number", "minimum": 0},
        "eig_tol": {"type": "number", "exclusiveMinimum": 0},
        "zero_tol": {"type": ["number", "null"], "minimum": 0},
        "seed": {"type": "integer"},
    },
}

_QUALITY_SCHEMA = {
    "type": "object",
    "required": ["phi", "trustworthiness", "continuity", "neighbor_overlap", "spearman_intrinsic"],
    "properties": {
        "phi": {"type": "number", "minimum": 0},
        "trustworthiness": {"type": "number", "minimum": 0, "maximum": 1},
        "continuity": {"type": "number", "minimum": 0, "maximum": 1},
        "neighbor_overlap": {"type": "number", "minimum": 0, "maximum": 1},
        "spearman_intrinsic": {"type": ["number", "null"], "minimum": -1, "maximum": 1},
    },
}

MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "dataset", "params", "seed", "rng",
                 "n", "ambient_dim", "intrinsic_dim", "files"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"const": "generate"},
        "dataset": {"enum": ["spiral", "swiss_roll", "punctured_sphere"]},
        "params": {"type": "object"},
        "seed": {"type": "integer"},
        "rng": {"type": "string"},
        "n": {"type": "integer", "minimum": 2},
        "ambient_dim": {"type": "integer", "minimum": 1},
        "intrinsic_dim": {"type": "integer", "minimum": 1},
        "files": {"type": "object"},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "input", "n", "d", "config",
                 "eigenvalues", "dropped_eigenvalue", "phi", "row_sum_max_dev",
                 "reg_impact_count", "warnings", "outputs"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"const": "embed"},
        "input": {"type": "string"},
        "n": {"type": "integer", "minimum": 2},
        "d": {"type": "integer", "minimum": 1},
        "config": _CONFIG_SCHEMA,
        "eigenvalues": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "dropped_eigenvalue": {"type": "number", "minimum": 0},
        "phi": {"type": "number", "minimum": 0},
        "row_sum_max_dev": {"type": "number", "minimum": 0},
        "reg_impact_count": {"type": "integer", "minimum": 0},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "outputs": {"type": "object"},
    },
}

COMPARE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "input", "n", "d", "config",
                 "lle", "pca", "outputs"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"const": "compare"},
        "input": {"type": "string"},
        "n": {"type": "integer", "minimum": 2},
        "d": {"type": "integer", "minimum": 1},
        "config": _CONFIG_SCHEMA,
        "lle": {
            "allOf": [_QUALITY_SCHEMA],
            "required": ["eigenvalues", "dropped_eigenvalue", "warnings"],
        },
        "pca": {
            "allOf": [_QUALITY_SCHEMA],
            "required": ["explained_variance"],
        },
        "outputs": {"type": "object"},
    },
}

TIMING_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "wall_time_s", "stages"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "wall_time_s": {"type": "number", "minimum": 0},
        "stages": {"type": "object"},
    },
}


def config_echo(config: LleConfig) -> dict:
    return {
        "k": config.k,
        "p": config.p,
        "metric": config.metric.value,
        "reg_eps": config.reg_eps,
        "eig_tol": config.eig_tol,
        "zero_tol": config.zero_tol,
        "seed": config.seed,
    }


def embed_report(
    input_path: str,
    n: int,
    d: int,
    embedding: Embedding,
    phi: float,
    row_sum_max_dev: float,
    reg_impact_count: int,
    outputs: dict,
) -> dict:
    warnings = list(embedding.warnings)
    if reg_impact_count > 0:
        warnings.append(
            f"regularization changed the local objective by more than 1% "
            f"for {reg_impact_count} point(s)"
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "embed",
        "input": input_path,
        "n": n,
        "d": d,
        "config": config_echo(embedding.config),
        "eigenvalues": [float(v) for v in embedding.eigenvalues],
        "dropped_eigenvalue": float(embedding.dropped_eigenvalue),
        "phi": float(phi),
        "row_sum_max_dev": float(row_sum_max_dev),
        "reg_impact_count": int(reg_impact_count),
        "warnings": warnings,
        "outputs": outputs,
    }


def compare_report(
    input_path: str,
    n: int,
    d: int,
    config: LleConfig,
    lle_quality: QualityReport,
    embedding: Embedding,
    pca_quality: QualityReport,
    explained_variance,
    outputs: dict,
) -> dict:
    lle_side = lle_quality.as_dict()
    lle_side["eigenvalues"] = [float(v) for v in embedding.eigenvalues]
    lle_side["dropped_eigenvalue"] = float(embedding.dropped_eigenvalue)
    lle_side["warnings"] = list(embedding.warnings)
    pca_side = pca_quality.as_dict()
    pca_side["explained_variance"] = [float(v) for v in explained_variance]
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "compare",
        "input": input_path,
        "n": n,
        "d": d,
        "config": config_echo(config),
        "lle": lle_side,
        "pca": pca_side,
        "outputs": outputs,
    }
