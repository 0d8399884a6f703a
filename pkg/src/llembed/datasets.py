"""Synthetic benchmark manifolds and tabular point-data I/O.

Each generator is a pure function of (parameters, seed): rerunning it
reproduces the same coordinates, which is what makes downstream golden-file
tests and cross-run comparisons meaningful.  Randomness comes from the
portable generator in :mod:`llembed.rng`, never from global state.

CSV handling is deliberately narrow: comma delimiter, ``.`` decimal point,
LF or CRLF line ends, no quoting, no locale logic.  Headers are never
auto-detected; the caller says whether one is present.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ParameterError
from .jsonio import format_float
from .rng import Xoshiro256PlusPlus

__all__ = [
    "DataMatrix",
    "ManifoldSample",
    "generate_punctured_sphere",
    "generate_swiss_roll",
    "generate_spiral",
    "load_csv",
    "save_matrix",
]


@dataclass(frozen=True)
class DataMatrix:
    """n points in D ambient dimensions, stored row-per-point.

    All entries must be finite; n >= 2 and D >= 1.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise ParameterError(f"points must be a 2-D array, got ndim={pts.ndim}")
        if pts.shape[0] < 2 or pts.shape[1] < 1:
            raise ParameterError(f"need at least 2 points and 1 dimension, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ParameterError("points contain non-finite entries")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class ManifoldSample:
    """A generated dataset together with its ground-truth parameters.

    `intrinsic` has one row per data point and one column per intrinsic
    coordinate (1 for curves, 2 for surfaces).
    """

    data: DataMatrix
    intrinsic: np.ndarray
    name: str
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        intr = np.asarray(self.intrinsic, dtype=float)
        if intr.ndim != 2 or intr.shape[0] != self.data.n:
            raise ParameterError(
                f"intrinsic rows ({intr.shape[0] if intr.ndim == 2 else 'n/a'}) "
                f"must match data rows ({self.data.n})"
            )
        object.__setattr__(self, "intrinsic", intr)


def generate_punctured_sphere(n: int, cap_height: float = 0.4, seed: int = 0) -> ManifoldSample:
    """Uniform sample of the unit sphere with the polar cap above z = 1 - cap_height removed.

    Uses normalized 3-D Gaussian draws for uniformity and rejects points in
    the cap, so the sample stays exactly uniform on the remaining surface.
    Intrinsic coordinates are (azimuth, polar angle).

    Parameters
    ----------
    n : number of points, at least 10.
    cap_height : height of the removed cap, in (0, 2) exclusive.
    seed : generator seed.
    """
    if n < 10:
        raise ParameterError(f"n must be >= 10, got {n}")
    if not (0.0 < cap_height < 2.0):
        raise ParameterError(f"cap_height must lie in (0, 2), got {cap_height}")
    z_max = 1.0 - cap_height
    rng = Xoshiro256PlusPlus(seed)
    pts = np.empty((n, 3))
    intr = np.empty((n, 2))
    for i in range(n):
        while True:
            v = (rng.normal(), rng.normal(), rng.normal())
            norm = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
            if norm < 1e-12:
                continue
            x, y, z = v[0] / norm, v[1] / norm, v[2] / norm
            if z <= z_max:
                break
        pts[i] = (x, y, z)
        intr[i] = (math.atan2(y, x), math.acos(max(-1.0, min(1.0, z))))
    return ManifoldSample(
        DataMatrix(pts), intr, "punctured_sphere", seed,
        {"n": n, "cap_height": cap_height},
    )


def generate_swiss_roll(n: int, height: float = 21.0, seed: int = 0) -> ManifoldSample:
    """Swiss roll (t cos t, h, t sin t) with t in [1.5pi, 4.5pi], h in [0, height].

    Intrinsic coordinates are (t, h).
    """
    if n < 10:
        raise ParameterError(f"n must be >= 10, got {n}")
    if not height > 0:
        raise ParameterError(f"height must be positive, got {height}")
    rng = Xoshiro256PlusPlus(seed)
    t_lo, t_hi = 1.5 * math.pi, 4.5 * math.pi
    pts = np.empty((n, 3))
    intr = np.empty((n, 2))
    for i in range(n):
        t = rng.uniform(t_lo, t_hi)
        h = rng.uniform(0.0, height)
        pts[i] = (t * math.cos(t), h, t * math.sin(t))
        intr[i] = (t, h)
    return ManifoldSample(
        DataMatrix(pts), intr, "swiss_roll", seed, {"n": n, "height": height},
    )


def generate_spiral(n: int, turns: float = 1.5, seed: int = 0) -> ManifoldSample:
    """Planar Archimedean spiral (t cos t, t sin t), t in [0.5pi, 0.5pi + 2pi*turns].

    A one-dimensional manifold embedded in the plane; intrinsic coordinate
    is t itself.
    """
    if n < 10:
        raise ParameterError(f"n must be >= 10, got {n}")
    if not turns > 0:
        raise ParameterError(f"turns must be positive, got {turns}")
    rng = Xoshiro256PlusPlus(seed)
    t_lo = 0.5 * math.pi
    t_hi = t_lo + 2.0 * math.pi * turns
    pts = np.empty((n, 2))
    intr = np.empty((n, 1))
    for i in range(n):
        t = rng.uniform(t_lo, t_hi)
        pts[i] = (t * math.cos(t), t * math.sin(t))
        intr[i, 0] = t
    return ManifoldSample(
        DataMatrix(pts), intr, "spiral", seed, {"n": n, "turns": turns},
    )


def load_csv(path, has_header: bool = False) -> DataMatrix:
    """Load an all-numeric CSV file into a DataMatrix.

    Raises FormatError naming the offending 1-based file row/column for
    ragged rows, non-numeric cells, or an empty file.
    """
    with open(path, "r", newline="") as fh:
        text = fh.read()
    lines = text.splitlines()
    if has_header and lines:
        lines = lines[1:]
    rows = []
    width = None
    offset = 2 if has_header else 1
    for lineno, line in enumerate(lines, start=offset):
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise FormatError(
                f"{path}: row {lineno} has {len(cells)} columns, expected {width}",
                row=lineno,
            )
        parsed = []
        for colno, cell in enumerate(cells, start=1):
            try:
                value = float(cell.strip())
            except ValueError:
                raise FormatError(
                    f"{path}: row {lineno}, column {colno}: not a number: {cell.strip()!r}",
                    row=lineno, col=colno,
                ) from None
            if not math.isfinite(value):
                raise FormatError(
                    f"{path}: row {lineno}, column {colno}: non-finite value {cell.strip()!r}",
                    row=lineno, col=colno,
                )
            parsed.append(value)
        rows.append(parsed)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return DataMatrix(np.array(rows, dtype=float))


def save_matrix(matrix, path, format: str = "csv") -> None:
    """Write a matrix as CSV or a JSON array-of-arrays.

    Values are printed with 17 significant digits, so a save/load round
    trip reproduces the matrix exactly.  I/O failures propagate as OSError
    with the path in the message.
    """
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if format == "csv":
        lines = [",".join(format_float(v) for v in row) for row in m]
        payload = "\n".join(lines) + "\n"
    elif format == "json":
        rows = ["[" + ", ".join(format_float(v) for v in row) + "]" for row in m]
        payload = "[" + ",\n ".join(rows) + "]\n"
    else:
        raise ParameterError(f"unknown format {format!r}, expected 'csv' or 'json'")
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(payload)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def load_matrix_json(path) -> np.ndarray:
    """Read back a JSON array-of-arrays written by save_matrix."""
    with open(path) as fh:
        doc = json.load(fh)
    return np.array(doc, dtype=float)
