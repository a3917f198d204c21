"""Point clouds, CSV io, pairwise distances, and non-dominated filtering.

A point cloud holds decision-space points (one row per point) plus an
optional objective matrix with the same row count.  All distances used by
the complex-building code are Euclidean distances between decision points;
objective values only ever enter the dominance filter and the embedding
test.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


class CsvFormatError(ValueError):
    """Malformed input file: carries file and line diagnostics."""


def _as_matrix(a, name: str) -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-d matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite values")
    return m


@dataclass(frozen=True)
class PointCloud:
    """N decision points in R^n with an optional N x m objective matrix."""

    points: np.ndarray
    objectives: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "points", _as_matrix(self.points, "points"))
        if self.objectives is not None:
            obj = _as_matrix(self.objectives, "objectives")
            if obj.shape[0] != self.points.shape[0]:
                raise ValueError(
                    f"row-count mismatch: {self.points.shape[0]} decision rows "
                    f"vs {obj.shape[0]} objective rows"
                )
            object.__setattr__(self, "objectives", obj)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def n_vars(self) -> int:
        return self.points.shape[1]

    @property
    def n_objectives(self) -> Optional[int]:
        return None if self.objectives is None else self.objectives.shape[1]

    def restrict(self, indices) -> "PointCloud":
        """Sub-cloud with the given rows (order preserved)."""
        idx = np.asarray(indices, dtype=int)
        obj = None if self.objectives is None else self.objectives[idx]
        return PointCloud(self.points[idx], obj)


def _read_csv_matrix(path, prefix: str) -> np.ndarray:
    """Read a headed numeric CSV; the header must be prefix1..prefixK."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvFormatError(f"{path}: empty file")
        header = [h.strip() for h in header]
        expected = [f"{prefix}{i}" for i in range(1, len(header) + 1)]
        if header != expected:
            raise CsvFormatError(
                f"{path}:1: expected header {','.join(expected)}, got {','.join(header)}"
            )
        width = len(header)
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != width:
                raise CsvFormatError(
                    f"{path}:{lineno}: expected {width} columns, got {len(rec)}"
                )
            try:
                rows.append([float(cell) for cell in rec])
            except ValueError:
                bad = next(c for c in rec if not _is_float(c))
                raise CsvFormatError(
                    f"{path}:{lineno}: non-numeric value {bad!r}"
                ) from None
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_point_cloud(decision_csv, objective_csv=None) -> PointCloud:
    """Load a point cloud from x1..xn / f1..fm headed CSV files.

    Raises CsvFormatError with file/line diagnostics on malformed input and
    ValueError on a row-count mismatch between the two files.
    """
    points = _read_csv_matrix(decision_csv, "x")
    objectives = None
    if objective_csv is not None:
        objectives = _read_csv_matrix(objective_csv, "f")
        if objectives.shape[0] != points.shape[0]:
            raise ValueError(
                f"row-count mismatch: {decision_csv} has {points.shape[0]} rows, "
                f"{objective_csv} has {objectives.shape[0]}"
            )
    return PointCloud(points, objectives)


def _write_csv_matrix(path, prefix: str, m: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"{prefix}{i}" for i in range(1, m.shape[1] + 1)])
        for row in m:
            # repr round-trips doubles exactly, so reload == original bit-for-bit
            writer.writerow([repr(float(v)) for v in row])


def save_point_cloud(pc: PointCloud, decision_csv, objective_csv=None) -> None:
    """Write the cloud back to CSV files readable by load_point_cloud."""
    _write_csv_matrix(decision_csv, "x", pc.points)
    if objective_csv is not None:
        if pc.objectives is None:
            raise ValueError("point cloud has no objectives to write")
        _write_csv_matrix(objective_csv, "f", pc.objectives)


def pairwise_distances(pc: PointCloud) -> np.ndarray:
    """Euclidean distance matrix of the decision points.

    Computed from explicit coordinate differences (not the expanded
    quadratic form) so the result is exactly symmetric with an exactly
    zero diagonal.
    """
    x = pc.points if isinstance(pc, PointCloud) else _as_matrix(pc, "points")
    n = x.shape[0]
    out = np.empty((n, n), dtype=float)
    block = max(1, int(2**22 // max(1, n * x.shape[1])))
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        diff = x[lo:hi, None, :] - x[None, :, :]
        out[lo:hi] = np.sqrt((diff * diff).sum(axis=-1))
    return out


def non_dominated_filter(objectives, subset: Optional[Sequence[int]] = None) -> np.ndarray:
    """Indices of rows not dominated on the given objective columns.

    Row y dominates row x when y <= x holds componentwise on the subset
    with strict inequality somewhere; rows with identical subset-restricted
    values never dominate each other, so exact ties are all kept.
    """
    f = _as_matrix(objectives, "objectives")
    m = f.shape[1]
    if subset is None:
        cols = np.arange(m)
    else:
        cols = np.asarray(list(subset), dtype=int)
        if cols.size == 0:
            raise ValueError("objective subset is empty")
        if (cols < 0).any() or (cols >= m).any():
            raise ValueError(f"objective index out of range [0, {m})")
    g = f[:, cols]
    le = (g[:, None, :] <= g[None, :, :]).all(axis=-1)
    lt = (g[:, None, :] < g[None, :, :]).any(axis=-1)
    dominated = (le & lt).any(axis=0)
    return np.nonzero(~dominated)[0]
