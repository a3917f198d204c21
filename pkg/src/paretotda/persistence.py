"""Persistent homology of Rips filtrations over the two-element field.

Two reduction engines produce identical pairings:

* a generic boundary-matrix column reduction over the materialized
  filtration (any dimension, used for small complexes and as the
  reference in tests), and
* a Rips-specialized engine that computes dimension 0 by union-find over
  the sorted edge list and dimensions >= 1 by coboundary-matrix reduction
  with clearing, enumerating cofacets implicitly from the distance
  matrix.  Most columns are settled by their first pivot candidate
  without any column additions, which is what makes bootstrap-scale
  workloads tractable.

The fast engine is selected automatically when homology is requested only
below the complex dimension (the usual case: a complex of dimension d
carries no information about degree-d deaths, so the pipeline asks for
homology up to d-1).  Unpaired classes are reported as essential with
their death capped at the filtration's diameter limit.

Classes with birth == death are dropped from default diagrams; pass
``include_zero=True`` to keep them (they matter only for bookkeeping
invariants, never for Betti numbers or distances).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .rips import Filtration

_HUGE_CODE = np.iinfo(np.int64).max


@dataclass
class PersistenceDiagram:
    """Multiset of (dim, birth, death) classes with essential flags.

    Essential classes store death == delta_max.  ``maxdim`` is the largest
    homology dimension represented.
    """

    dims: np.ndarray
    births: np.ndarray
    deaths: np.ndarray
    essential: np.ndarray
    delta_max: float
    maxdim: int

    def __post_init__(self):
        self.dims = np.asarray(self.dims, dtype=np.int64)
        self.births = np.asarray(self.births, dtype=float)
        self.deaths = np.asarray(self.deaths, dtype=float)
        self.essential = np.asarray(self.essential, dtype=bool)
        if not (self.births <= self.deaths).all():
            raise ValueError("birth > death in persistence diagram")

    def __len__(self) -> int:
        return self.dims.size

    def in_dim(self, dim: int) -> Tuple[np.ndarray, np.ndarray]:
        """(births, deaths) of the classes in one dimension."""
        sel = self.dims == dim
        return self.births[sel], self.deaths[sel]

    def select(self, mask) -> "PersistenceDiagram":
        return PersistenceDiagram(
            self.dims[mask],
            self.births[mask],
            self.deaths[mask],
            self.essential[mask],
            self.delta_max,
            self.maxdim,
        )

    def persistence(self) -> np.ndarray:
        return self.deaths - self.births


def write_diagram_csv(diagram: PersistenceDiagram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("dim,birth,death,essential\n")
        for d, b, dd, e in zip(
            diagram.dims, diagram.births, diagram.deaths, diagram.essential
        ):
            fh.write(f"{int(d)},{float(b)!r},{float(dd)!r},{int(e)}\n")


def read_diagram_csv(path, delta_max: Optional[float] = None) -> PersistenceDiagram:
    rows = np.genfromtxt(path, delimiter=",", skip_header=1, ndmin=2)
    if rows.size == 0:
        raise ValueError(f"{path}: empty diagram file")
    dims = rows[:, 0].astype(np.int64)
    ess = rows[:, 3].astype(bool)
    dmax = float(rows[ess][:, 2].max()) if ess.any() else float(rows[:, 2].max())
    if delta_max is not None:
        dmax = delta_max
    return PersistenceDiagram(
        dims, rows[:, 1], rows[:, 2], ess, dmax, int(dims.max()) if dims.size else 0
    )


# ---------------------------------------------------------------------------
# generic engine: explicit boundary-matrix column reduction


def _reduce_generic(filtration: Filtration, hom_maxdim: int):
    """Standard left-to-right reduction; tracks deaths explicitly."""
    simplices = filtration.simplices()
    index = {s.vertices: i for i, s in enumerate(simplices)}
    diam = [s.diameter for s in simplices]
    sdim = [s.dimension for s in simplices]

    pivot: Dict[int, np.ndarray] = {}
    is_death = [False] * len(simplices)
    is_birthed = [False] * len(simplices)
    pairs = []
    for j, s in enumerate(simplices):
        if s.dimension == 0:
            continue
        col = np.array(
            sorted(
                index[s.vertices[:k] + s.vertices[k + 1 :]]
                for k in range(len(s.vertices))
            ),
            dtype=np.int64,
        )
        while col.size:
            low = int(col[-1])
            if low not in pivot:
                pivot[low] = col
                is_death[j] = True
                is_birthed[low] = True
                pairs.append((sdim[low], diam[low], diam[j]))
                break
            col = np.setxor1d(col, pivot[low], assume_unique=True)
    essential = [
        (sdim[j], diam[j])
        for j in range(len(simplices))
        if sdim[j] <= hom_maxdim and not is_death[j] and not is_birthed[j]
    ]
    return pairs, essential


# ---------------------------------------------------------------------------
# fast engine: union-find H0 + implicit coboundary reduction with clearing


def _sorted_edges(dm: np.ndarray, delta_max: float):
    n = dm.shape[0]
    iu, ju = np.triu_indices(n, 1)
    keep = dm[iu, ju] <= delta_max
    iu, ju = iu[keep], ju[keep]
    de = dm[iu, ju]
    order = np.lexsort((ju, iu, de))
    return iu[order], ju[order], de[order]


def _h0_union_find(n: int, iu, ju, de):
    """Kruskal sweep: dim-0 deaths plus the positive-edge mask."""
    parent = np.arange(n)

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    deaths = []
    positive = np.zeros(iu.size, dtype=bool)
    for k in range(iu.size):
        ra, rb = find(int(iu[k])), find(int(ju[k]))
        if ra == rb:
            positive[k] = True
        else:
            parent[max(ra, rb)] = min(ra, rb)
            deaths.append(de[k])
    n_components = n - len(deaths)
    return np.array(deaths), positive, n_components


def _triangle_codes(w, u, v, n):
    """Sorted-triple codes for edges (u,v) with u < v extended by vertex w."""
    a = np.minimum(w, u)
    c = np.maximum(w, v)
    b = u + v + w - a - c
    return (a.astype(np.int64) * n + b) * n + c


def _initial_edge_pivots(dm, delta_max, iu, ju, de, chunk=4096):
    """Batched first pivot candidate of every edge's coboundary column.

    Returns (pivot_diam, pivot_code); pivot_diam is inf where the edge has
    no cofacet within delta_max.
    """
    n = dm.shape[0]
    E = iu.size
    piv_d = np.full(E, np.inf)
    piv_c = np.full(E, _HUGE_CODE, dtype=np.int64)
    widx = np.arange(n, dtype=np.int64)
    for lo in range(0, E, chunk):
        hi = min(E, lo + chunk)
        u, v, d = iu[lo:hi], ju[lo:hi], de[lo:hi]
        m = np.maximum(dm[u], dm[v])
        rows = np.arange(hi - lo)
        m[rows, u] = np.inf
        m[rows, v] = np.inf
        m[m > delta_max] = np.inf
        eff = np.maximum(m, d[:, None])
        dmin = eff.min(axis=1)
        codes = _triangle_codes(widx[None, :], u[:, None], v[:, None], n)
        codes = np.where(eff == dmin[:, None], codes, _HUGE_CODE)
        piv_d[lo:hi] = dmin
        piv_c[lo:hi] = np.where(np.isinf(dmin), _HUGE_CODE, codes.min(axis=1))
    return piv_d, piv_c


def _materialize_edge_column(dm, delta_max, u, v, d, n):
    """All cofacet (diam, code) pairs of one edge, sorted by (diam, code)."""
    m = np.maximum(dm[u], dm[v])
    m[u] = np.inf
    m[v] = np.inf
    ok = m <= delta_max
    w = np.nonzero(ok)[0]
    diams = np.maximum(m[w], d)
    codes = _triangle_codes(w, np.full(w.size, u), np.full(w.size, v), n)
    order = np.lexsort((codes, diams))
    return diams[order], codes[order]




def _heap_pop_entry(heap):
    """Pop the minimal odd-multiplicity (diam, code) entry, cancelling pairs."""
    while heap:
        d, c = heapq.heappop(heap)
        count = 1
        while heap and heap[0][1] == c:
            heapq.heappop(heap)
            count += 1
        if count % 2:
            return d, c
    return None


def _heap_drain(heap):
    """Remaining column content as sorted arrays with parity cancellation."""
    if not heap:
        return np.empty(0), np.empty(0, dtype=np.int64)
    arr = np.array(heap)
    d, c = arr[:, 0], arr[:, 1].astype(np.int64)
    order = np.lexsort((c, d))
    d, c = d[order], c[order]
    boundaries = np.nonzero(np.diff(c) != 0)[0] + 1
    starts = np.concatenate([[0], boundaries])
    ends = np.concatenate([boundaries, [c.size]])
    keep = starts[(ends - starts) % 2 == 1]
    return d[keep], c[keep]


def _reduce_column_heap(k, cofacets_of, pivot_owner):
    """Reduce one colliding column with a lazy heap accumulator.

    Long reduction chains add one owner column per step; accumulating them
    in a heap keeps each step at push cost instead of re-sorting an
    ever-growing array.  Returns ('pair', (diam, code)) after claiming the
    final pivot (the drained remainder is stored for future collisions),
    or ('essential', None) when the column cancels away.
    """
    diams, codes = cofacets_of(int(k))
    heap = list(zip(diams.tolist(), codes.tolist()))
    heapq.heapify(heap)
    while True:
        piv = _heap_pop_entry(heap)
        if piv is None:
            return "essential", None
        pc = int(piv[1])
        if pc not in pivot_owner:
            rest_d, rest_c = _heap_drain(heap)
            pivot_owner[pc] = (
                np.concatenate([[piv[0]], rest_d]),
                np.concatenate([[pc], rest_c]),
            )
            return "pair", piv
        owner = pivot_owner[pc]
        if isinstance(owner, int):
            owner = cofacets_of(owner)
            pivot_owner[pc] = owner
        # the owner's leading entry is the shared pivot, already popped here
        for d, c in zip(owner[0][1:].tolist(), owner[1][1:].tolist()):
            heapq.heappush(heap, (d, c))


def _coreduce_dim(sim_diams, order_desc, cofacets_of, initial_pivots):
    """Coboundary reduction of one dimension's positive simplices.

    ``cofacets_of(k)`` materializes the full column of simplex k;
    ``initial_pivots`` gives each column's first pivot candidate so the
    common no-collision case never materializes anything.  Columns whose
    pivot collides are reduced through the heap accumulator.

    Returns ((pair_births, pair_deaths), essential_births, pivot_owner).
    """
    pivot_owner: Dict[int, object] = {}
    pairs_b: List[float] = []
    pairs_d: List[float] = []
    essential: List[float] = []

    for k in order_desc:
        pd, pc = initial_pivots(k)
        if pc == _HUGE_CODE:
            essential.append(sim_diams[k])
            continue
        if pc not in pivot_owner:
            pivot_owner[pc] = int(k)
            pairs_b.append(sim_diams[k])
            pairs_d.append(pd)
            continue
        kind, piv = _reduce_column_heap(k, cofacets_of, pivot_owner)
        if kind == "essential":
            essential.append(sim_diams[k])
        else:
            pairs_b.append(sim_diams[k])
            pairs_d.append(float(piv[0]))
    return (np.array(pairs_b), np.array(pairs_d)), np.array(essential), pivot_owner


def _rips_persistence_fast(dm: np.ndarray, delta_max: float, hom_maxdim: int):
    """Pairs and essentials for homology dims 0..hom_maxdim (<= 1 here)."""
    n = dm.shape[0]
    iu, ju, de = _sorted_edges(dm, delta_max)
    h0_deaths, positive, n_comp = _h0_union_find(n, iu, ju, de)

    out = {
        0: {
            "births": np.zeros(h0_deaths.size),
            "deaths": h0_deaths,
            "essential": np.zeros(n_comp),
        }
    }
    if hom_maxdim >= 1:
        pos_idx = np.nonzero(positive)[0]
        piv_d, piv_c = _initial_edge_pivots(dm, delta_max, iu, ju, de)

        def cofacets_of(k):
            return _materialize_edge_column(
                dm, delta_max, int(iu[k]), int(ju[k]), float(de[k]), n
            )

        def initial(k):
            return float(piv_d[k]), int(piv_c[k])

        (pb, pdth), ess, _ = _coreduce_dim(de, pos_idx[::-1], cofacets_of, initial)
        out[1] = {"births": pb, "deaths": pdth, "essential": ess}
    return out


def _assemble(levels, delta_max, hom_maxdim, include_zero) -> PersistenceDiagram:
    dims, births, deaths, essential = [], [], [], []
    for dim in range(hom_maxdim + 1):
        lv = levels.get(dim)
        if lv is None:
            continue
        b, d = lv["births"], lv["deaths"]
        if not include_zero and b.size:
            keep = d > b
            b, d = b[keep], d[keep]
        dims.append(np.full(b.size, dim))
        births.append(b)
        deaths.append(d)
        essential.append(np.zeros(b.size, dtype=bool))
        eb = lv["essential"]
        dims.append(np.full(eb.size, dim))
        births.append(eb)
        deaths.append(np.full(eb.size, delta_max))
        essential.append(np.ones(eb.size, dtype=bool))
    return PersistenceDiagram(
        np.concatenate(dims) if dims else np.empty(0),
        np.concatenate(births) if births else np.empty(0),
        np.concatenate(deaths) if deaths else np.empty(0),
        np.concatenate(essential) if essential else np.empty(0, dtype=bool),
        float(delta_max),
        hom_maxdim,
    )


def rips_persistence(
    dm: np.ndarray,
    delta_max: Optional[float] = None,
    hom_maxdim: int = 1,
    include_zero: bool = False,
) -> PersistenceDiagram:
    """Fast-path persistence straight from a distance matrix.

    Homology is computed in dimensions 0..hom_maxdim from the implicit
    (hom_maxdim+1)-dimensional Rips filtration; nothing is materialized.
    Only hom_maxdim <= 1 is supported here; for higher dimensions build a
    filtration and call compute_persistence.
    """
    dm = np.asarray(dm, dtype=float)
    if delta_max is None:
        delta_max = float(dm.max())
    if hom_maxdim not in (0, 1):
        raise ValueError("rips_persistence supports hom_maxdim 0 or 1")
    levels = _rips_persistence_fast(dm, delta_max, hom_maxdim)
    return _assemble(levels, delta_max, hom_maxdim, include_zero)


def compute_persistence(
    filtration: Filtration,
    homology_maxdim: Optional[int] = None,
    include_zero: bool = False,
) -> PersistenceDiagram:
    """Persistence diagram of a filtration over the two-element field.

    ``homology_maxdim`` defaults to the complex dimension; classes in the
    top dimension can never die (there is nothing above to fill them), so
    they appear capped at delta_max.  Analysis pipelines pass
    homology_maxdim = maxdim - 1, which routes to the implicit fast
    engine.
    """
    hom = filtration.maxdim if homology_maxdim is None else homology_maxdim
    if not 0 <= hom <= filtration.maxdim:
        raise ValueError(
            f"homology_maxdim must be in [0, {filtration.maxdim}], got {hom}"
        )
    if hom <= 1 and hom < filtration.maxdim:
        levels = _rips_persistence_fast(filtration.dm, filtration.delta_max, hom)
        return _assemble(levels, filtration.delta_max, hom, include_zero)
    pairs, essential = _reduce_generic(filtration, hom)
    levels: Dict[int, Dict[str, List[float]]] = {}
    for dim in range(hom + 1):
        levels[dim] = {"births": [], "deaths": [], "essential": []}
    for dim, b, d in pairs:
        if dim <= hom:
            levels[dim]["births"].append(b)
            levels[dim]["deaths"].append(d)
    for dim, b in essential:
        levels[dim]["essential"].append(b)
    for dim in levels:
        for key in levels[dim]:
            levels[dim][key] = np.array(levels[dim][key])
    return _assemble(levels, filtration.delta_max, hom, include_zero)


def betti_at(diagram: PersistenceDiagram, delta: float) -> np.ndarray:
    """Betti numbers beta_0..beta_maxdim at one scale.

    A class counts when birth <= delta < death; essential classes keep
    counting up to and including delta_max.
    """
    if not 0 <= delta <= diagram.delta_max:
        raise ValueError(
            f"delta must be in [0, {diagram.delta_max}], got {delta}"
        )
    alive = (diagram.births <= delta) & ((delta < diagram.deaths) | diagram.essential)
    return np.array(
        [int(np.sum(alive & (diagram.dims == k))) for k in range(diagram.maxdim + 1)]
    )


# ---------------------------------------------------------------------------
# independent oracle: Betti numbers by dense GF(2) rank computation

ORACLE_SIZE_CAP = 2000


def _gf2_rank(m: np.ndarray) -> int:
    m = m.copy().astype(np.uint8)
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        hit = np.nonzero(m[rank:, c])[0]
        if hit.size == 0:
            continue
        p = rank + hit[0]
        m[[rank, p]] = m[[p, rank]]
        below = np.nonzero(m[rank + 1 :, c])[0] + rank + 1
        m[below] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def homology_rank_oracle(complex_at_delta: Filtration) -> np.ndarray:
    """Betti numbers of a fixed complex via dense Gaussian elimination.

    beta_k = dim ker d_k - rank d_{k+1}, everything over GF(2).  Intended
    as an independent cross-check for compute_persistence on small inputs;
    refuses complexes above ORACLE_SIZE_CAP simplices.
    """
    filt = complex_at_delta
    if len(filt) > ORACLE_SIZE_CAP:
        raise ValueError(f"oracle size cap {ORACLE_SIZE_CAP} exceeded: {len(filt)}")
    by_dim: List[Dict[tuple, int]] = []
    for d in range(filt.maxdim + 1):
        by_dim.append(
            {tuple(int(v) for v in row): i for i, row in enumerate(filt.verts[d])}
        )
    betti = []
    ranks = []
    for d in range(1, filt.maxdim + 1):
        n_rows = len(by_dim[d - 1])
        n_cols = len(by_dim[d])
        mat = np.zeros((max(n_rows, 1), max(n_cols, 1)), dtype=np.uint8)
        for j, simplex in enumerate(by_dim[d]):
            for k in range(len(simplex)):
                face = simplex[:k] + simplex[k + 1 :]
                mat[by_dim[d - 1][face], j] = 1
        ranks.append(_gf2_rank(mat) if n_cols else 0)
    ranks.append(0)  # no boundary above the top dimension
    for d in range(filt.maxdim + 1):
        n_d = len(by_dim[d])
        rank_d = 0 if d == 0 else ranks[d - 1]
        betti.append(n_d - rank_d - ranks[d])
    return np.array(betti, dtype=int)
