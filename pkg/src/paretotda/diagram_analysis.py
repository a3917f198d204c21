"""Diagram comparison and diameter selection.

Contains the exact bottleneck distance (binary search over candidate radii
with a bipartite matching feasibility test), the bootstrap confidence band
used to separate signal classes from sampling noise (a Hausdorff-quantile
resampling band, sized so that any class a resampling perturbation could
have created falls inside it), and the mid-lifetime rule that turns the
surviving classes into a working complex diameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from .persistence import PersistenceDiagram
from .pointset import PointCloud, pairwise_distances


def _linf(b1, d1, b2, d2) -> np.ndarray:
    """Pairwise L-inf costs; infinite deaths on both sides cost nothing."""
    db = np.abs(b1[:, None] - b2[None, :])
    i1, i2 = np.isinf(d1), np.isinf(d2)
    dd = np.abs(d1[:, None] - d2[None, :])
    if i1.any() or i2.any():
        both = i1[:, None] & i2[None, :]
        dd = np.where(both, 0.0, dd)
    return np.maximum(db, dd)


def _matching_feasible(cost, pers1, pers2, r) -> bool:
    """Matching feasibility at radius r with diagonal moves allowed.

    Short points (persistence <= 2r) may retire to the diagonal, so a
    radius-r matching exists iff the bipartite graph of allowed pairs
    (cost <= r, not both endpoints short) has a matching covering every
    tall point of both diagrams.  Each uncovered tall point is fixed with
    a generalized augmenting path that may end at a free point or release
    a short point back to the diagonal.
    """
    n1, n2 = pers1.size, pers2.size
    short1 = pers1 <= 2 * r
    short2 = pers2 <= 2 * r
    ok = cost <= r
    ok &= ~(short1[:, None] & short2[None, :])
    match_l = np.full(n1, -1)
    match_r = np.full(n2, -1)

    def cover(start, ok_ab, match_a, match_b, short_a) -> bool:
        # alternating BFS from an uncovered tall on side A, expanded one
        # full frontier at a time with boolean row reductions; terminates
        # at a free B-point, or by releasing a short A-point reached
        # through a matching edge
        nb = match_b.size
        seen_b = np.zeros(nb, dtype=bool)
        prev = np.full(nb, -1)
        frontier = np.array([start])
        while frontier.size:
            reach = ok_ab[frontier]
            new_b = reach.any(axis=0) & ~seen_b
            if not new_b.any():
                return False
            idx_b = np.nonzero(new_b)[0]
            seen_b[idx_b] = True
            prev[idx_b] = frontier[np.argmax(reach[:, idx_b], axis=0)]
            partners = match_b[idx_b]
            done = (partners == -1) | short_a[np.clip(partners, 0, None)] & (partners != -1)
            hits = np.nonzero(done)[0]
            if hits.size:
                v = int(idx_b[hits[0]])
                w = int(match_b[v])
                if w != -1:
                    match_a[w] = -1  # release the short A-point
                while True:
                    u2 = int(prev[v])
                    v_prev = int(match_a[u2])
                    match_a[u2] = v
                    match_b[v] = u2
                    if u2 == start:
                        return True
                    v = v_prev
            frontier = partners[partners != -1]
        return False

    ok_t = ok.T
    for i in np.nonzero(~short1)[0]:
        if match_l[i] == -1 and not cover(int(i), ok, match_l, match_r, short1):
            return False
    for j in np.nonzero(~short2)[0]:
        if match_r[j] == -1 and not cover(int(j), ok_t, match_r, match_l, short2):
            return False
    return True


def bottleneck_distance(
    d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int
) -> float:
    """Exact bottleneck distance between two diagrams in one dimension.

    Essential classes take part at their capped death values.  The result
    is one of the finitely many candidate radii (pair costs and half
    persistences), located by binary search with a matching test.
    """
    b1, dd1 = d1.in_dim(dim)
    b2, dd2 = d2.in_dim(dim)
    pers1 = dd1 - b1
    pers2 = dd2 - b2
    if b1.size == 0 and b2.size == 0:
        return 0.0
    cost = _linf(b1, dd1, b2, dd2)
    cands = np.concatenate([[0.0], pers1 / 2, pers2 / 2, cost.ravel()])
    cands = np.unique(cands[np.isfinite(cands)])
    lo, hi = 0, cands.size - 1
    if not _matching_feasible(cost, pers1, pers2, cands[hi]):
        return float("inf")
    while lo < hi:
        mid = (lo + hi) // 2
        if _matching_feasible(cost, pers1, pers2, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def bottleneck_max_over_dims(
    d1: PersistenceDiagram, d2: PersistenceDiagram, maxdim: int
) -> float:
    return max(bottleneck_distance(d1, d2, k) for k in range(maxdim + 1))


@dataclass
class ConfidenceBand:
    """Diagonal noise band of half-width c from a resampling bootstrap."""

    c: float
    alpha: float
    replicates: int
    seed: int
    distances: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)

    def is_noise(self, births, deaths) -> np.ndarray:
        return (np.asarray(deaths) - np.asarray(births)) <= 2 * self.c


def _band_from_dm(
    dm: np.ndarray, alpha: float, B: int, seed: int
) -> ConfidenceBand:
    n = dm.shape[0]
    all_idx = np.arange(n)
    dists = np.empty(B)
    for rep in range(B):
        rng = np.random.default_rng([seed, rep])
        kept = np.unique(rng.integers(0, n, n))
        omitted = np.setdiff1d(all_idx, kept, assume_unique=True)
        if omitted.size == 0:
            dists[rep] = 0.0
        else:
            dists[rep] = float(dm[np.ix_(omitted, kept)].min(axis=1).max())
    c = float(np.quantile(dists, 1.0 - alpha, method="higher"))
    return ConfidenceBand(c, alpha, B, seed, dists)


def confidence_band(
    pc: PointCloud,
    alpha: float = 0.05,
    B: int = 100,
    maxdim: int = 2,
    seed: int = 0,
    delta_max: Optional[float] = None,
) -> ConfidenceBand:
    """Bootstrap noise band for the cloud's persistence diagram.

    B size-N resamples with replacement (replicate rng streams derive from
    (seed, replicate index)); each replicate is scored by the Hausdorff
    distance between the full sample and the resample, and c is the
    empirical (1-alpha) quantile of those scores.  Under the stability of
    Rips diagrams a resampling perturbation of Hausdorff size c moves no
    class further than an off-diagonal distance 2c, so pairs with
    persistence <= 2c are read as sampling noise.

    maxdim is accepted for interface symmetry with the analysis pipeline;
    the Hausdorff score does not depend on it.
    """
    if B < 1:
        raise ValueError("bootstrap replicate count B must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    if pc.n_points < 2:
        raise ValueError("confidence band needs at least 2 points")
    dm = pairwise_distances(pc)
    cap = float(dm.max()) if delta_max is None else float(delta_max)
    if cap <= 0:
        raise ValueError("degenerate cloud: all points identical")
    return _band_from_dm(dm, alpha, B, seed)


def signal_pairs(
    diagram: PersistenceDiagram, band: ConfidenceBand
) -> PersistenceDiagram:
    """Classes above the noise band; essential classes always count."""
    keep = (diagram.persistence() > 2 * band.c) | diagram.essential
    return diagram.select(keep)


@dataclass
class DiameterEstimate:
    """Mid-lifetime diameter (max birth + min death) / 2 of signal classes."""

    delta: float
    max_birth: float
    min_death: float
    consistent: bool


PairsLike = Union[PersistenceDiagram, Iterable[Tuple[float, float]]]


def estimate_diameter(signal: PairsLike, delta_max: float) -> DiameterEstimate:
    """Diameter estimate from signal classes.

    Essential deaths participate at their delta_max cap.  When the largest
    birth reaches past the smallest death there is no single scale at
    which all signal classes are alive; the estimate is still returned
    with consistent=False so callers can warn instead of failing.
    """
    if isinstance(signal, PersistenceDiagram):
        births, deaths = signal.births, signal.deaths
    else:
        arr = np.asarray(list(signal), dtype=float)
        if arr.size == 0:
            births = deaths = np.empty(0)
        else:
            births, deaths = arr[:, 0], arr[:, 1]
    if births.size == 0:
        raise ValueError("no signal classes: cannot estimate a diameter")
    deaths = np.where(np.isinf(deaths), delta_max, deaths)
    max_birth = float(births.max())
    min_death = float(deaths.min())
    return DiameterEstimate(
        delta=(max_birth + min_death) / 2.0,
        max_birth=max_birth,
        min_death=min_death,
        consistent=max_birth < min_death,
    )
