"""Vietoris-Rips complexes and filtrations under the simplex-diameter rule.

A simplex enters the complex at the largest pairwise distance among its
vertices, so the complex at scale delta contains every vertex set (up to
the dimension cap) whose points are mutually within delta.  The filtration
is the same family swept over delta, stored in a single deterministic
total order: (diameter, dimension, lexicographic vertex tuple).

Simplices are kept in per-dimension vertex/diameter arrays; ``Simplex``
objects are only materialized on demand.  Enumeration is guarded by a
configurable cap on the total simplex count because the complete
k-skeleton grows as C(N, k+1).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterator, List, Optional

import numpy as np

DEFAULT_SIMPLEX_CAP = 50_000_000
SIMPLEX_CAP_ENV = "PARETOTDA_SIMPLEX_CAP"


class SimplexCountError(RuntimeError):
    """Raised when a build would exceed the configured simplex budget."""


def simplex_cap(override: Optional[int] = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get(SIMPLEX_CAP_ENV)
    return int(env) if env else DEFAULT_SIMPLEX_CAP


@dataclass(frozen=True, order=True)
class Simplex:
    """A simplex keyed by its filtration appearance.

    Field order makes tuple comparison match the filtration total order:
    diameter, then dimension, then lexicographic vertices.
    """

    diameter: float
    dimension: int
    vertices: tuple

    def __post_init__(self):
        if list(self.vertices) != sorted(set(self.vertices)):
            raise ValueError(f"vertices must be strictly increasing, got {self.vertices}")
        if self.dimension != len(self.vertices) - 1:
            raise ValueError("dimension does not match vertex count")


@dataclass
class Filtration:
    """Rips filtration up to ``maxdim`` with all diameters <= ``delta_max``.

    ``verts[d]`` is an (S_d, d+1) int array and ``diams[d]`` the matching
    diameters; within each dimension rows are sorted by (diameter, lex).
    ``dm`` keeps the source distance matrix so persistence code can
    enumerate cofacets without materializing them.
    """

    maxdim: int
    delta_max: float
    dm: np.ndarray
    verts: List[np.ndarray]
    diams: List[np.ndarray]

    def count(self, dim: int) -> int:
        return 0 if dim > self.maxdim else self.verts[dim].shape[0]

    def __len__(self) -> int:
        return sum(self.count(d) for d in range(self.maxdim + 1))

    @property
    def n_points(self) -> int:
        return self.dm.shape[0]

    def simplices(self) -> List[Simplex]:
        """Materialize all simplices in filtration order (small complexes)."""
        return list(self.iter_simplices())

    def iter_simplices(self) -> Iterator[Simplex]:
        items = []
        for d in range(self.maxdim + 1):
            for row, diam in zip(self.verts[d], self.diams[d]):
                items.append(Simplex(float(diam), d, tuple(int(v) for v in row)))
        items.sort()
        return iter(items)


def _sort_dim(verts: np.ndarray, diams: np.ndarray):
    """Order one dimension's simplices by (diameter, lex vertices)."""
    if verts.shape[0] == 0:
        return verts, diams
    keys = [verts[:, k] for k in range(verts.shape[1] - 1, -1, -1)] + [diams]
    order = np.lexsort(keys)
    return verts[order], diams[order]


def _enumerate_cliques(dm: np.ndarray, delta_max: float, maxdim: int, cap: int):
    """Per-dimension vertex arrays of all cliques with diameter <= delta_max."""
    n = dm.shape[0]
    adj = (dm <= delta_max) & ~np.eye(n, dtype=bool)
    verts = [np.arange(n, dtype=np.int64)[:, None]]
    diams = [np.zeros(n)]
    total = n

    if maxdim >= 1:
        iu, ju = np.nonzero(np.triu(adj, 1))
        everts = np.stack([iu, ju], axis=1).astype(np.int64)
        ediams = dm[iu, ju]
        total += everts.shape[0]
        if total > cap:
            raise SimplexCountError(
                f"simplex count {total} exceeds cap {cap} at dimension 1"
            )
        verts.append(everts)
        diams.append(ediams)

    for d in range(2, maxdim + 1):
        prev_v, prev_d = verts[d - 1], diams[d - 1]
        chunks_v, chunks_d = [], []
        count = 0
        for row, diam in zip(prev_v, prev_d):
            # extend each (d-1)-simplex by common neighbors above its max vertex
            mask = np.ones(n, dtype=bool)
            for v in row:
                mask &= adj[v]
            mask[: row[-1] + 1] = False
            cands = np.nonzero(mask)[0]
            if cands.size == 0:
                continue
            new_d = np.maximum(diam, dm[np.ix_(row, cands)].max(axis=0))
            keep = new_d <= delta_max
            cands, new_d = cands[keep], new_d[keep]
            if cands.size == 0:
                continue
            block = np.empty((cands.size, d + 1), dtype=np.int64)
            block[:, :d] = row
            block[:, d] = cands
            chunks_v.append(block)
            chunks_d.append(new_d)
            count += cands.size
            if total + count > cap:
                raise SimplexCountError(
                    f"simplex count exceeds cap {cap} at dimension {d}"
                )
        if chunks_v:
            verts.append(np.concatenate(chunks_v))
            diams.append(np.concatenate(chunks_d))
        else:
            verts.append(np.empty((0, d + 1), dtype=np.int64))
            diams.append(np.empty(0))
        total += count
    return verts, diams


def projected_complete_count(n: int, maxdim: int) -> int:
    """Size of the complete complex on n vertices up to maxdim."""
    return sum(math.comb(n, k + 1) for k in range(maxdim + 1))


def build_filtration(
    dm: np.ndarray,
    maxdim: int = 2,
    delta_max: Optional[float] = None,
    cap: Optional[int] = None,
) -> Filtration:
    """Full Rips filtration of a distance matrix up to a diameter cap.

    delta_max defaults to the max pairwise distance, the scale at which the
    complex becomes complete.  Aborts with SimplexCountError if the build
    would exceed the simplex budget (env PARETOTDA_SIMPLEX_CAP or the cap
    argument).
    """
    dm = np.asarray(dm, dtype=float)
    n = dm.shape[0]
    if dm.ndim != 2 or dm.shape[1] != n:
        raise ValueError("distance matrix must be square")
    if not 0 <= maxdim <= n - 1:
        raise ValueError(f"maxdim must be in [0, {n - 1}], got {maxdim}")
    if delta_max is None:
        delta_max = float(dm.max())
    if delta_max < 0:
        raise ValueError("delta_max must be >= 0")
    budget = simplex_cap(cap)
    if math.isfinite(delta_max) and delta_max >= dm.max():
        projected = projected_complete_count(n, maxdim)
        if projected > budget:
            raise SimplexCountError(
                f"projected simplex count {projected} exceeds cap {budget}"
            )
    verts, diams = _enumerate_cliques(dm, delta_max, maxdim, budget)
    verts_sorted, diams_sorted = [], []
    for d in range(maxdim + 1):
        v, w = _sort_dim(verts[d], diams[d])
        verts_sorted.append(v)
        diams_sorted.append(w)
    return Filtration(maxdim, float(delta_max), dm, verts_sorted, diams_sorted)


def build_rips(
    dm: np.ndarray, delta: float, maxdim: int = 2, cap: Optional[int] = None
) -> Filtration:
    """Rips complex at one fixed diameter (filtration restricted to <= delta)."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    return build_filtration(dm, maxdim, delta_max=delta, cap=cap)


def simplex_count_profile(filtration: Filtration) -> np.ndarray:
    """Number of simplices per dimension 0..maxdim."""
    return np.array([filtration.count(d) for d in range(filtration.maxdim + 1)])


def write_filtration_csv(filtration: Filtration, path) -> None:
    """Debug dump: one row (dim, diameter, v0..vk) per simplex, in order."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("dim,diameter,vertices\n")
        for s in filtration.iter_simplices():
            vs = " ".join(str(v) for v in s.vertices)
            fh.write(f"{s.dimension},{float(s.diameter)!r},{vs}\n")
