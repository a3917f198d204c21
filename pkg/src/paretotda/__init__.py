"""Topology checks for sampled Pareto sets.

Builds Vietoris-Rips filtrations on a finite Pareto-set sample, selects a
working diameter from the persistence diagram (bootstrap confidence band +
mid-lifetime rule), and tests two structural conditions: the sample's
Betti profile against that of a simplex (S1) and injectivity of the
induced simplicial objective map via strict LP feasibility (S2).
"""

from .diagram_analysis import (
    ConfidenceBand,
    DiameterEstimate,
    bottleneck_distance,
    confidence_band,
    estimate_diameter,
    signal_pairs,
)
from .lp import LPResult, StrictFeasibilityProblem, solve_strict_feasibility
from .persistence import (
    PersistenceDiagram,
    betti_at,
    compute_persistence,
    homology_rank_oracle,
    rips_persistence,
)
from .pointset import (
    PointCloud,
    load_point_cloud,
    non_dominated_filter,
    pairwise_distances,
    save_point_cloud,
)
from .problems import PROBLEMS, ProblemSpec, chebyshev_scalarize, sample_pareto
from .rips import (
    Filtration,
    Simplex,
    SimplexCountError,
    build_filtration,
    build_rips,
    simplex_count_profile,
)
from .simplicity import (
    AnalysisConfig,
    S1Verdict,
    S2Verdict,
    SimplicityReport,
    analyze,
    check_s1,
    check_s2,
    mapped_hull_family,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "ConfidenceBand",
    "DiameterEstimate",
    "Filtration",
    "LPResult",
    "PROBLEMS",
    "PersistenceDiagram",
    "PointCloud",
    "ProblemSpec",
    "S1Verdict",
    "S2Verdict",
    "Simplex",
    "SimplexCountError",
    "SimplicityReport",
    "StrictFeasibilityProblem",
    "analyze",
    "betti_at",
    "bottleneck_distance",
    "build_filtration",
    "build_rips",
    "chebyshev_scalarize",
    "check_s1",
    "check_s2",
    "compute_persistence",
    "confidence_band",
    "estimate_diameter",
    "homology_rank_oracle",
    "load_point_cloud",
    "mapped_hull_family",
    "non_dominated_filter",
    "pairwise_distances",
    "rips_persistence",
    "sample_pareto",
    "save_point_cloud",
    "signal_pairs",
    "simplex_count_profile",
    "solve_strict_feasibility",
]
