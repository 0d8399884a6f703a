"""Batch command-line front end.

Four subcommands: `generate` synthesizes benchmark manifolds, `embed` runs
the nonlinear pipeline on a CSV dataset, `compare` runs it head-to-head
against PCA, and `bench` times the pipeline stages across dataset sizes.

Exit codes: 0 success, 1 runtime or numerical failure, 2 usage error.
All analytical outputs are deterministic functions of the flags and input
files; measured wall times go to separate timing files so reruns stay
byte-identical.
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
import time

import numpy as np

from . import jsonio, report
from .datasets import (
    DataMatrix,
    generate_punctured_sphere,
    generate_spiral,
    generate_swiss_roll,
    load_csv,
    save_matrix,
)
from .errors import LlembedError
from .evaluation import pca_fit, pca_transform, quality_report
from .local_weights import write_weight_coo
from .rng import RNG_ALGORITHM
from .spectral_embedding import LleConfig, embedding_cost, lle_fit
from .svg import write_scatter_svg

_GENERATORS = {
    "spiral": (generate_spiral, "turns", 1.5),
    "swiss_roll": (generate_swiss_roll, "height", 21.0),
    "punctured_sphere": (generate_punctured_sphere, "cap_height", 0.4),
}

_BENCH_COLUMNS = ["n", "k", "p", "repetitions", "status",
                  "knn_s", "weights_s", "alignment_s", "eig_s", "total_s"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llembed",
        description="Nonlinear dimensionality reduction toolkit: dataset generation, "
                    "embedding, PCA comparison, and stage benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="synthesize a benchmark manifold")
    gen.add_argument("name", choices=sorted(_GENERATORS))
    gen.add_argument("--n", type=int, required=True, help="number of points (>= 10)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--turns", type=float, default=None, help="spiral only")
    gen.add_argument("--height", type=float, default=None, help="swiss_roll only")
    gen.add_argument("--cap-height", dest="cap_height", type=float, default=None,
                     help="punctured_sphere only")
    gen.add_argument("--out", required=True, help="output directory")

    def add_embed_flags(p, with_solver_flags=True):
        p.add_argument("--input", required=True, help="CSV file of points, one row per point")
        p.add_argument("--has-header", action="store_true")
        p.add_argument("--k", type=int, required=True, help="neighbor count")
        p.add_argument("--p", type=int, required=True, help="target dimension")
        p.add_argument("--metric", choices=["euclidean", "manhattan", "cosine"],
                       default="euclidean")
        p.add_argument("--reg-eps", dest="reg_eps", type=float, default=1e-3)
        if with_solver_flags:
            p.add_argument("--eig-tol", dest="eig_tol", type=float, default=1e-8)
            p.add_argument("--zero-tol", dest="zero_tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--plot", action="store_true", help="also write an SVG scatter plot")

    emb = sub.add_parser("embed", help="embed a dataset")
    add_embed_flags(emb)
    emb.add_argument("--dump-weights", action="store_true",
                     help="also write the weight matrix as coordinate-list text")

    cmp_ = sub.add_parser("compare", help="embed with both methods and score them")
    add_embed_flags(cmp_, with_solver_flags=False)

    bench = sub.add_parser("bench", help="time pipeline stages across sizes")
    bench.add_argument("--sizes", required=True,
                       help="comma-separated dataset sizes, each >= 50")
    bench.add_argument("--k", type=int, required=True)
    bench.add_argument("--p", type=int, required=True)
    bench.add_argument("--repetitions", type=int, default=3)
    bench.add_argument("--out", default=None, help="also write the CSV table to this file")
    return parser


def _validate_common_flags(parser, args) -> None:
    """Flag sanity that needs no file access; failures are usage errors."""
    if args.k < 1:
        parser.error(f"--k must be >= 1, got {args.k}")
    if args.p < 1:
        parser.error(f"--p must be >= 1, got {args.p}")
    if args.reg_eps < 0:
        parser.error(f"--reg-eps must be nonnegative, got {args.reg_eps}")
    if getattr(args, "eig_tol", 1.0) <= 0:
        parser.error(f"--eig-tol must be positive, got {args.eig_tol}")
    zt = getattr(args, "zero_tol", None)
    if zt is not None and zt < 0:
        parser.error(f"--zero-tol must be nonnegative, got {zt}")


def _config_from_args(args) -> LleConfig:
    return LleConfig(
        k=args.k,
        p=args.p,
        metric=args.metric,
        reg_eps=args.reg_eps,
        eig_tol=getattr(args, "eig_tol", 1e-8),
        zero_tol=getattr(args, "zero_tol", None),
        seed=args.seed,
    )


def _write_timing(out_dir: str, command: str, wall: float, stages: dict) -> None:
    jsonio.dump(
        {
            "schema_version": report.SCHEMA_VERSION,
            "command": command,
            "wall_time_s": wall,
            "stages": {name: float(v) for name, v in stages.items()},
        },
        os.path.join(out_dir, "timing.json"),
    )


def cmd_generate(parser, args) -> int:
    if args.n < 10:
        parser.error(f"--n must be >= 10, got {args.n}")
    generator, param_name, default = _GENERATORS[args.name]
    for other in ("turns", "height", "cap_height"):
        value = getattr(args, other)
        if value is not None and other != param_name:
            parser.error(f"--{other.replace('_', '-')} does not apply to {args.name}")
    param_value = getattr(args, param_name)
    if param_value is None:
        param_value = default
    sample = generator(args.n, param_value, args.seed)
    os.makedirs(args.out, exist_ok=True)
    save_matrix(sample.data.points, os.path.join(args.out, "data.csv"), "csv")
    save_matrix(sample.intrinsic, os.path.join(args.out, "intrinsic.csv"), "csv")
    manifest = {
        "schema_version": report.SCHEMA_VERSION,
        "command": "generate",
        "dataset": sample.name,
        "params": {"n": args.n, param_name: float(param_value)},
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
        "n": sample.data.n,
        "ambient_dim": sample.data.d,
        "intrinsic_dim": sample.intrinsic.shape[1],
        "files": {"data": "data.csv", "intrinsic": "intrinsic.csv"},
    }
    jsonio.dump(manifest, os.path.join(args.out, "manifest.json"))
    print(f"generated {sample.name}: {sample.data.n} points -> {args.out}")
    return 0


def cmd_embed(parser, args) -> int:
    _validate_common_flags(parser, args)
    started = time.perf_counter()
    data = load_csv(args.input, has_header=args.has_header)
    config = _config_from_args(args)
    timings: dict = {}
    embedding, weights, _ = lle_fit(data, config, timings=timings)
    phi = embedding_cost(embedding.y, weights)
    os.makedirs(args.out, exist_ok=True)
    save_matrix(embedding.y, os.path.join(args.out, "embedding.csv"), "csv")
    outputs = {"embedding": "embedding.csv", "plot": None, "weights_dump": None}
    if args.plot:
        write_scatter_svg(
            os.path.join(args.out, "plot.svg"),
            [(f"embedding (k={config.k}, p={config.p})", embedding.y[:, : min(2, config.p)])],
        )
        outputs["plot"] = "plot.svg"
    if args.dump_weights:
        write_weight_coo(weights, os.path.join(args.out, "weights.txt"))
        outputs["weights_dump"] = "weights.txt"
    doc = report.embed_report(
        input_path=args.input,
        n=data.n,
        d=data.d,
        embedding=embedding,
        phi=phi,
        row_sum_max_dev=weights.max_row_sum_dev(),
        reg_impact_count=weights.reg_impact_count,
        outputs=outputs,
    )
    jsonio.dump(doc, os.path.join(args.out, "report.json"))
    _write_timing(args.out, "embed", time.perf_counter() - started, timings)
    for line in doc["warnings"]:
        print(f"warning: {line}", file=sys.stderr)
    print(f"embedded {data.n} points ({data.d} -> {config.p} dims) -> {args.out}")
    return 0


def cmd_compare(parser, args) -> int:
    _validate_common_flags(parser, args)
    started = time.perf_counter()
    data = load_csv(args.input, has_header=args.has_header)
    config = _config_from_args(args)
    timings: dict = {}
    embedding, weights, _ = lle_fit(data, config, timings=timings)
    t0 = time.perf_counter()
    model = pca_fit(data, config.p)
    pca_coords = pca_transform(model, data)
    timings["pca"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    lle_quality = quality_report(data, embedding.y, config.k, reg_eps=config.reg_eps,
                                 metric=config.metric, weights=weights)
    pca_quality = quality_report(data, pca_coords, config.k, reg_eps=config.reg_eps,
                                 metric=config.metric, weights=weights)
    timings["quality"] = time.perf_counter() - t0
    os.makedirs(args.out, exist_ok=True)
    save_matrix(embedding.y, os.path.join(args.out, "lle.csv"), "csv")
    save_matrix(pca_coords, os.path.join(args.out, "pca.csv"), "csv")
    outputs = {"lle": "lle.csv", "pca": "pca.csv", "plot": None}
    if args.plot:
        cols = min(2, config.p)
        write_scatter_svg(
            os.path.join(args.out, "compare.svg"),
            [(f"nonlinear (k={config.k})", embedding.y[:, :cols]),
             ("pca", pca_coords[:, :cols])],
        )
        outputs["plot"] = "compare.svg"
    doc = report.compare_report(
        input_path=args.input,
        n=data.n,
        d=data.d,
        config=config,
        lle_quality=lle_quality,
        embedding=embedding,
        pca_quality=pca_quality,
        explained_variance=model.explained_variance,
        outputs=outputs,
    )
    jsonio.dump(doc, os.path.join(args.out, "compare.json"))
    _write_timing(args.out, "compare", time.perf_counter() - started, timings)
    for line in embedding.warnings:
        print(f"warning: {line}", file=sys.stderr)
    print(
        f"compared on {data.n} points: trustworthiness "
        f"lle={lle_quality.trustworthiness:.4f} pca={pca_quality.trustworthiness:.4f} "
        f"-> {args.out}"
    )
    return 0


def cmd_bench(parser, args) -> int:
    _validate_common_flags(parser, args)
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        parser.error(f"--sizes must be comma-separated integers, got {args.sizes!r}")
    if not sizes:
        parser.error("--sizes must name at least one size")
    if min(sizes) < 50:
        parser.error(f"every size must be >= 50, got {min(sizes)}")
    if args.repetitions < 1:
        parser.error(f"--repetitions must be >= 1, got {args.repetitions}")
    rows = []
    for n in sizes:
        if args.k >= n:
            print(f"warning: size {n} skipped (k={args.k} >= n)", file=sys.stderr)
            rows.append([str(n), str(args.k), str(args.p), str(args.repetitions),
                         "skipped: k >= n", "", "", "", "", ""])
            continue
        sample = generate_swiss_roll(n, 21.0, seed=0)
        config = LleConfig(k=args.k, p=args.p)
        per_stage: dict[str, list[float]] = {}
        totals = []
        for _ in range(args.repetitions):
            timings: dict = {}
            t0 = time.perf_counter()
            lle_fit(sample.data, config, timings=timings)
            totals.append(time.perf_counter() - t0)
            for name, v in timings.items():
                per_stage.setdefault(name, []).append(v)
        med = {name: statistics.median(v) for name, v in per_stage.items()}
        rows.append([
            str(n), str(args.k), str(args.p), str(args.repetitions), "ok",
            jsonio.format_float(med["neighbors"]),
            jsonio.format_float(med["weights"]),
            jsonio.format_float(med["alignment"]),
            jsonio.format_float(med["eigensolve"]),
            jsonio.format_float(statistics.median(totals)),
        ])
    table = ",".join(_BENCH_COLUMNS) + "\n" + "\n".join(",".join(r) for r in rows) + "\n"
    sys.stdout.write(table)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(table)
    return 0


_DISPATCH = {
    "generate": cmd_generate,
    "embed": cmd_embed,
    "compare": cmd_compare,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](parser, args)
    except LlembedError as exc:
        stage = getattr(exc, "stage", None)
        where = f" at stage '{stage}'" if stage else ""
        print(f"llembed: error{where}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"llembed: I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
