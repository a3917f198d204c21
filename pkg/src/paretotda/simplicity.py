"""Structural tests on a sampled Pareto set and the analysis orchestrator.

The connectivity test (S1) asks whether the complex at the working
diameter has the Betti profile of a single contractible piece: one
component, nothing in higher dimensions.  The embedding test (S2) maps
each simplex through the objective values of its vertices and asks, for
pairs of distinct simplices, whether the interiors of their image hulls
intersect; a strictly positive solution of the pair's coefficient system
is a witness that the objective map folds the sample onto itself.

``analyze`` chains the full pipeline per objective subset: dominance
filter, bootstrap band, diameter estimate, then both tests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .diagram_analysis import (
    ConfidenceBand,
    DiameterEstimate,
    _band_from_dm,
    estimate_diameter,
    signal_pairs,
)
from .lp import LPResult, StrictFeasibilityProblem, solve_strict_feasibility
from .persistence import PersistenceDiagram, betti_at, rips_persistence
from .pointset import PointCloud, non_dominated_filter, pairwise_distances
from .rips import Filtration, build_rips, simplex_cap, SimplexCountError


@dataclass
class S1Verdict:
    delta_used: float
    betti: List[int]
    violated: bool
    reasons: List[str]


def _s1_from_betti(delta: float, betti: np.ndarray) -> S1Verdict:
    reasons = []
    if betti[0] != 1:
        reasons.append(f"beta_0 = {int(betti[0])} != 1")
    for k in range(1, betti.size):
        if betti[k] != 0:
            reasons.append(f"beta_{k} = {int(betti[k])} != 0")
    return S1Verdict(float(delta), [int(b) for b in betti], bool(reasons), reasons)


def _count_triangles(adj: np.ndarray) -> int:
    a = adj.astype(np.int64)
    return int(np.trace(a @ a @ a) // 6)


def check_s1(pc: Union[PointCloud, np.ndarray], delta: float, maxdim: int = 2) -> S1Verdict:
    """Betti-profile test of the complex at one diameter.

    Homology is read in dimensions 0..maxdim-1 of the maxdim-complex;
    a violation is beta_0 != 1 or any higher Betti number nonzero.
    """
    points = pc.points if isinstance(pc, PointCloud) else np.asarray(pc, float)
    dm = pairwise_distances(PointCloud(points))
    adj = (dm <= delta) & ~np.eye(dm.shape[0], dtype=bool)
    projected = dm.shape[0] + int(adj.sum() // 2) + _count_triangles(adj)
    if projected > simplex_cap():
        raise SimplexCountError(
            f"projected complex size {projected} exceeds cap {simplex_cap()}"
        )
    hom = max(0, maxdim - 1)
    diagram = rips_persistence(dm, delta_max=delta, hom_maxdim=hom)
    return _s1_from_betti(delta, betti_at(diagram, delta))


def mapped_hull_family(
    filtration: Filtration, objectives: np.ndarray
) -> List[Tuple[tuple, np.ndarray]]:
    """Image vertex lists of every simplex: ([x_1..x_k], [g(x_1)..g(x_k)]).

    Realizes the vertex-induced simplicial map into objective space; the
    downstream pair test decides whether image hull interiors overlap.
    """
    obj = np.asarray(objectives, dtype=float)
    if obj.ndim != 2:
        raise ValueError("objectives must be an N x m matrix")
    if obj.shape[0] < filtration.n_points:
        raise ValueError(
            f"objectives have {obj.shape[0]} rows but the complex has "
            f"{filtration.n_points} vertices"
        )
    out = []
    for s in filtration.iter_simplices():
        out.append((s.vertices, obj[list(s.vertices)]))
    return out


@dataclass
class S2Witness:
    sigma: tuple
    tau: tuple
    a: np.ndarray
    b: np.ndarray
    t_star: float


@dataclass
class S2Verdict:
    violated: bool
    witnesses: List[S2Witness]
    pairs_checked: int
    inconclusive_pairs: int
    pairs_candidate: int = 0
    truncated: bool = False
    degenerate_images: int = 0
    pair_dim: Optional[int] = None


def _pair_lp(img_s: np.ndarray, img_t: np.ndarray, eps: float) -> LPResult:
    k, l = img_s.shape[0], img_t.shape[0]
    A = np.concatenate([img_s.T, -img_t.T], axis=1)
    problem = StrictFeasibilityProblem(
        A,
        np.zeros(img_s.shape[1]),
        list(range(k + l)),
        [list(range(k)), list(range(k, k + l))],
    )
    return solve_strict_feasibility(problem, eps=eps)


def check_s2(
    complex_at_delta: Filtration,
    objectives: np.ndarray,
    pair_dim: Union[int, str, None] = None,
    eps: float = 1e-9,
    simplex_budget: int = 1500,
    pair_budget: int = 20_000,
    max_witnesses: int = 10,
    early_stop: bool = True,
) -> S2Verdict:
    """Pairwise image-hull intersection test over the complex.

    pair_dim selects the simplices paired up: an explicit dimension,
    "top" for the highest dimension present, "all" for every dimension,
    or None for the default, dimension 1.  Image 1-cells of an embedding
    stay disjoint in any objective space, so edge pairs witness genuine
    folding without the spurious secant-cell intersections that
    higher-dimensional cells of a curved image surface produce.

    Pairs whose image projections are separated on any screening axis
    cannot intersect and are skipped outright.  When the simplex or pair
    count exceeds its budget a deterministic evenly-strided subset is
    checked and the verdict is marked truncated; LP failures count as
    inconclusive, never as violations.
    """
    filt = complex_at_delta
    obj = np.asarray(objectives, dtype=float)
    if obj.ndim != 2 or obj.shape[0] < filt.n_points:
        raise ValueError("objective matrix does not cover the complex vertices")

    if pair_dim is None:
        dims = [1 if filt.count(1) else 0]
    elif pair_dim == "top":
        dims = [max((d for d in range(filt.maxdim + 1) if filt.count(d)), default=0)]
    elif pair_dim == "all":
        dims = [d for d in range(filt.maxdim + 1) if filt.count(d)]
    else:
        pair_dim = int(pair_dim)
        if pair_dim > filt.maxdim:
            raise ValueError(f"pair_dim {pair_dim} exceeds complex maxdim {filt.maxdim}")
        dims = [pair_dim]

    width = max(dims) + 1
    verts = np.concatenate(
        [
            np.pad(filt.verts[d], ((0, 0), (0, width - (d + 1))), constant_values=-1)
            for d in dims
        ]
    )
    truncated = False
    if verts.shape[0] > simplex_budget:
        sel = np.unique(np.linspace(0, verts.shape[0] - 1, simplex_budget).astype(int))
        verts = verts[sel]
        truncated = True

    S = verts.shape[0]
    sizes = (verts >= 0).sum(axis=1)
    m = obj.shape[1]
    images = []
    degenerate = 0
    for i in range(S):
        vs = verts[i, : sizes[i]]
        img = obj[vs]
        images.append(img)
        if sizes[i] > 1:
            centered = img - img.mean(axis=0)
            if np.linalg.matrix_rank(centered, tol=1e-12) < sizes[i] - 1:
                degenerate += 1

    # projection screen: hulls can only intersect if their projections
    # overlap on every axis, coordinate axes plus a fixed bundle of
    # deterministic random directions; this is a pure necessary condition,
    # so skipped pairs are exact non-intersections
    dirs = np.concatenate(
        [np.eye(m), np.random.default_rng(20).standard_normal((12, m))]
    )
    proj = np.full((S, dirs.shape[0], 2), 0.0)
    for i in range(S):
        p = images[i] @ dirs.T
        proj[i, :, 0] = p.min(axis=0)
        proj[i, :, 1] = p.max(axis=0)
    lo, hi = proj[:, :, 0], proj[:, :, 1]
    overlap = (lo[:, None, :] <= hi[None, :, :]) & (lo[None, :, :] <= hi[:, None, :])
    cand_i, cand_j = np.nonzero(np.triu(overlap.all(axis=2), 1))
    pairs_candidate = cand_i.size
    if pairs_candidate > pair_budget:
        sel = np.unique(np.linspace(0, pairs_candidate - 1, pair_budget).astype(int))
        cand_i, cand_j = cand_i[sel], cand_j[sel]
        truncated = True

    if cand_i.size and sizes.min() == sizes.max() == 2:
        # segment pairs admit an exact closed-form decision: a non-parallel
        # pair has a unique affine intersection (s, t), and strict
        # feasibility holds iff it is realized (zero residual) strictly
        # inside both segments; only near-parallel pairs and strict
        # crossings are left for the LP, which also produces the witness
        p0 = obj[verts[cand_i, 0]]
        d1 = obj[verts[cand_i, 1]] - p0
        q0 = obj[verts[cand_j, 0]]
        d2 = obj[verts[cand_j, 1]] - q0
        rhs = q0 - p0
        a11 = (d1 * d1).sum(axis=1)
        a22 = (d2 * d2).sum(axis=1)
        a12 = -(d1 * d2).sum(axis=1)
        b1 = (d1 * rhs).sum(axis=1)
        b2 = -(d2 * rhs).sum(axis=1)
        det = a11 * a22 - a12 * a12
        scale = np.maximum(a11 * a22, 1e-30)
        parallel = np.abs(det) <= 1e-12 * scale
        safe_det = np.where(parallel, 1.0, det)
        s = (b1 * a22 - a12 * b2) / safe_det
        t = (a11 * b2 - a12 * b1) / safe_det
        gap = p0 + s[:, None] * d1 - q0 - t[:, None] * d2
        resid = np.abs(gap).max(axis=1)
        margin = np.minimum.reduce([s, 1.0 - s, t, 1.0 - t])
        crossing = (~parallel) & (resid <= 1e-7) & (margin > eps / 2)
        keep = parallel | crossing
        cand_i, cand_j = cand_i[keep], cand_j[keep]
    elif cand_i.size and sizes.min() == sizes.max():
        # same-shape pairs admit a batched affine-consistency screen: if
        # the equality system (image columns plus the two normalization
        # rows) has no solution at all, strict feasibility is impossible
        # and the LP can be skipped; this is exact, not heuristic
        k = int(sizes[0])
        img_arr = obj[verts[:, :k]]
        A = np.empty((cand_i.size, m + 2, 2 * k))
        A[:, :m, :k] = img_arr[cand_i].transpose(0, 2, 1)
        A[:, :m, k:] = -img_arr[cand_j].transpose(0, 2, 1)
        A[:, m, :] = 0.0
        A[:, m, :k] = 1.0
        A[:, m + 1, :] = 0.0
        A[:, m + 1, k:] = 1.0
        rhs = np.zeros(m + 2)
        rhs[m] = rhs[m + 1] = 1.0
        sol = np.linalg.pinv(A) @ rhs
        resid = np.abs(A @ sol[..., None] - rhs[:, None]).max(axis=(1, 2))
        keep = resid <= 1e-9
        cand_i, cand_j = cand_i[keep], cand_j[keep]

    witnesses: List[S2Witness] = []
    inconclusive = 0
    checked = 0
    for i, j in zip(cand_i, cand_j):
        checked += 1
        res = _pair_lp(images[i], images[j], eps)
        if res.status == "singular":
            inconclusive += 1
            continue
        if res.feasible:
            k = sizes[i]
            witnesses.append(
                S2Witness(
                    tuple(int(v) for v in verts[i, :k]),
                    tuple(int(v) for v in verts[j, : sizes[j]]),
                    res.witness[:k].copy(),
                    res.witness[k:].copy(),
                    float(res.t_star),
                )
            )
            if early_stop and len(witnesses) >= max_witnesses:
                truncated = truncated or checked < pairs_candidate
                break
    return S2Verdict(
        violated=bool(witnesses),
        witnesses=witnesses,
        pairs_checked=checked,
        inconclusive_pairs=inconclusive,
        pairs_candidate=pairs_candidate,
        truncated=truncated,
        degenerate_images=degenerate,
        pair_dim=dims[0] if len(dims) == 1 else -1,
    )


@dataclass
class AnalysisConfig:
    maxdim: int = 2
    alpha: float = 0.05
    bootstrap: int = 100
    seed: int = 0
    delta: Optional[float] = None
    delta_max: Optional[float] = None
    pair_dim: Union[int, str, None] = None
    subsets: Union[str, int] = "full"
    run_s2: Optional[bool] = None  # None: run iff objectives present
    eps: float = 1e-9
    s2_simplex_budget: int = 1500
    s2_pair_budget: int = 20_000
    s2_max_witnesses: int = 10

    def to_dict(self) -> dict:
        return {
            "maxdim": self.maxdim,
            "alpha": self.alpha,
            "bootstrap": self.bootstrap,
            "seed": self.seed,
            "delta": self.delta,
            "delta_max": self.delta_max,
            "pair_dim": self.pair_dim,
            "subsets": self.subsets,
            "run_s2": self.run_s2,
            "eps": self.eps,
            "s2_simplex_budget": self.s2_simplex_budget,
            "s2_pair_budget": self.s2_pair_budget,
            "s2_max_witnesses": self.s2_max_witnesses,
        }


@dataclass
class SubproblemResult:
    subset: Optional[Tuple[int, ...]]
    n_points: int
    status: str  # ok | insufficient sample
    delta_max: float = 0.0
    band: Optional[ConfidenceBand] = None
    estimate: Optional[DiameterEstimate] = None
    delta_used: Optional[float] = None
    delta_overridden: bool = False
    s1: Optional[S1Verdict] = None
    s2: Optional[S2Verdict] = None
    diagram: Optional[PersistenceDiagram] = None
    timings: Dict[str, float] = field(default_factory=dict)


@dataclass
class SimplicityReport:
    config: AnalysisConfig
    n_points: int
    n_vars: int
    n_objectives: Optional[int]
    results: Dict[Optional[Tuple[int, ...]], SubproblemResult]
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def full(self) -> SubproblemResult:
        """Result of the full problem (or the whole cloud without objectives)."""
        key = (
            tuple(range(self.n_objectives))
            if self.n_objectives is not None
            else None
        )
        return self.results[key]


def _subset_list(m: int, mode: Union[str, int]) -> List[Tuple[int, ...]]:
    full = tuple(range(m))
    if mode == "full":
        return [full]
    if mode == "all":
        max_size = m
    else:
        max_size = int(mode)
        if not 1 <= max_size <= m:
            raise ValueError(f"subset size budget must be in [1, {m}]")
    from itertools import combinations

    subs: List[Tuple[int, ...]] = []
    for size in range(1, max_size + 1):
        subs.extend(combinations(range(m), size))
    if full not in subs:
        subs.append(full)
    return subs


def _analyze_subset(
    pc: PointCloud, subset: Optional[Tuple[int, ...]], config: AnalysisConfig
) -> SubproblemResult:
    t_start = time.perf_counter()
    timings: Dict[str, float] = {}
    if subset is not None:
        idx = non_dominated_filter(pc.objectives, subset)
        points = pc.points[idx]
        objectives = pc.objectives[np.ix_(idx, np.asarray(subset))]
    else:
        points, objectives = pc.points, None
    n = points.shape[0]
    if n < 2:
        return SubproblemResult(subset, n, "insufficient sample")

    dm = pairwise_distances(PointCloud(points))
    cap = float(dm.max()) if config.delta_max is None else float(config.delta_max)
    hom = max(0, config.maxdim - 1)

    t0 = time.perf_counter()
    diagram = rips_persistence(dm, cap, hom)
    timings["persistence"] = time.perf_counter() - t0

    band = None
    est = None
    if config.delta is not None:
        delta = float(config.delta)
        overridden = True
    else:
        t0 = time.perf_counter()
        band = _band_from_dm(dm, config.alpha, config.bootstrap, config.seed)
        timings["bootstrap_band"] = time.perf_counter() - t0
        est = estimate_diameter(signal_pairs(diagram, band), cap)
        delta = est.delta
        overridden = False

    t0 = time.perf_counter()
    s1 = _s1_from_betti(delta, betti_at(diagram, min(delta, cap)))
    timings["s1"] = time.perf_counter() - t0

    s2 = None
    run_s2 = config.run_s2 if config.run_s2 is not None else objectives is not None
    if run_s2:
        if objectives is None:
            raise ValueError("S2 requires objectives")
        t0 = time.perf_counter()
        # only simplices of the pair dimension are needed, so build the
        # complex no deeper than the pair test will look
        if config.pair_dim in ("top", "all"):
            s2_maxdim = config.maxdim
        elif config.pair_dim is None:
            s2_maxdim = min(1, config.maxdim)
        else:
            s2_maxdim = min(config.maxdim, max(0, int(config.pair_dim)))
        complex_at_delta = build_rips(dm, min(delta, cap), maxdim=s2_maxdim)
        s2 = check_s2(
            complex_at_delta,
            objectives,
            pair_dim=config.pair_dim,
            eps=config.eps,
            simplex_budget=config.s2_simplex_budget,
            pair_budget=config.s2_pair_budget,
            max_witnesses=config.s2_max_witnesses,
        )
        timings["s2"] = time.perf_counter() - t0

    timings["total"] = time.perf_counter() - t_start
    return SubproblemResult(
        subset,
        n,
        "ok",
        cap,
        band,
        est,
        delta,
        overridden,
        s1,
        s2,
        diagram,
        timings,
    )


def analyze(pc: PointCloud, config: Optional[AnalysisConfig] = None) -> SimplicityReport:
    """Run the full pipeline over the configured objective subsets.

    Without objectives the cloud itself is analyzed (S1 only).  Results
    are deterministic given (input, config, seed).
    """
    config = config or AnalysisConfig()
    t0 = time.perf_counter()
    if pc.objectives is None:
        if config.run_s2:
            raise ValueError("S2 requires objectives")
        if config.subsets != "full":
            raise ValueError("objective subsets require objectives")
        subsets: List[Optional[Tuple[int, ...]]] = [None]
    else:
        subsets = list(_subset_list(pc.objectives.shape[1], config.subsets))
    results = {}
    for subset in subsets:
        results[subset] = _analyze_subset(pc, subset, config)
    return SimplicityReport(
        config,
        pc.n_points,
        pc.n_vars,
        pc.n_objectives,
        results,
        {"total": time.perf_counter() - t0},
    )
