import numpy as np
import pytest

from paretotda.pointset import PointCloud, pairwise_distances
from paretotda.rips import build_rips
from paretotda.simplicity import (
    AnalysisConfig,
    analyze,
    check_s1,
    check_s2,
    mapped_hull_family,
)
from paretotda.problems import PROBLEMS, sample_pareto

from _oracles import brute_non_dominated, components_at


class TestS1:
    def test_two_far_points_violate(self):
        v = check_s1(np.array([[0.0], [5.0]]), delta=1.0, maxdim=2)
        assert v.violated
        assert v.betti[0] == 2
        assert any("beta_0 = 2" in r for r in v.reasons)

    def test_connected_blob_clean(self):
        rng = np.random.default_rng(0)
        v = check_s1(rng.random((50, 2)) * 0.2, delta=0.3, maxdim=2)
        assert not v.violated and v.betti == [1, 0]

    def test_ring_flags_beta1(self):
        th = np.linspace(0, 2 * np.pi, 13)[:-1]
        pts = np.stack([np.cos(th), np.sin(th)], axis=1)
        v = check_s1(pts, delta=0.7, maxdim=2)
        assert v.violated
        assert v.betti == [1, 1]

    def test_verdict_is_function_of_betti(self):
        rng = np.random.default_rng(1)
        for _ in range(15):
            pts = rng.random((rng.integers(3, 20), 2))
            delta = float(rng.random())
            v = check_s1(pts, delta=delta, maxdim=2)
            derived = v.betti[0] != 1 or any(b != 0 for b in v.betti[1:])
            assert v.violated == derived

    def test_dtlz7_component_count(self):
        pc = sample_pareto(PROBLEMS["dtlz7"], 300, seed=0)
        delta = 0.15
        v = check_s1(pc, delta=delta, maxdim=2)
        assert v.violated
        dm = pairwise_distances(pc)
        assert v.betti[0] == components_at(dm, delta) == 4

    def test_med_clean_at_paper_scale(self):
        pc = sample_pareto(PROBLEMS["med"], 300, seed=0)
        v = check_s1(pc, delta=0.5, maxdim=2)
        assert not v.violated and v.betti == [1, 0]


class TestMappedHulls:
    def test_edge_images_verbatim(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0]])
        obj = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        filt = build_rips(pairwise_distances(PointCloud(pts)), 1.5, maxdim=1)
        fam = mapped_hull_family(filt, obj)
        by_verts = {v: img for v, img in fam}
        assert np.array_equal(by_verts[(0, 1)], obj)
        assert np.array_equal(by_verts[(0,)], obj[[0]])

    def test_duplicate_images_pass_through(self):
        pts = np.array([[0.0], [1.0]])
        obj = np.array([[2.0, 2.0], [2.0, 2.0]])
        filt = build_rips(pairwise_distances(PointCloud(pts)), 2.0, maxdim=1)
        fam = mapped_hull_family(filt, obj)
        assert all(np.array_equal(img, obj[list(v)]) for v, img in fam)

    def test_missing_objectives(self):
        filt = build_rips(pairwise_distances(PointCloud([[0.0], [1.0]])), 2.0, 1)
        with pytest.raises(ValueError):
            mapped_hull_family(filt, np.zeros((1, 2)))


def segments_complex(images):
    """Two far-apart decision edges whose images are the given segments."""
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [50.0, 0.0], [51.0, 0.0]])
    dm = pairwise_distances(PointCloud(pts))
    filt = build_rips(dm, 1.5, maxdim=2)
    return filt, np.asarray(images, dtype=float)


class TestS2:
    def test_crossing_segments_violation(self):
        filt, obj = segments_complex([[0, 0], [1, 1], [0, 1], [1, 0]])
        verdict = check_s2(filt, obj, pair_dim=1)
        assert verdict.violated
        w = verdict.witnesses[0]
        assert w.t_star >= 0.25
        assert w.a == pytest.approx([0.5, 0.5], abs=1e-7)
        assert w.b == pytest.approx([0.5, 0.5], abs=1e-7)

    def test_shared_vertex_non_collinear_clean(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]])
        dm = pairwise_distances(PointCloud(pts))
        filt = build_rips(dm, 1.0, maxdim=1)  # edges (0,1), (0,2) only
        assert filt.count(1) == 2
        obj = np.array([[0.0, 0.0], [1.0, 0.0], [0.3, 0.7]])
        verdict = check_s2(filt, obj, pair_dim=1)
        assert not verdict.violated
        assert verdict.pairs_checked >= 0

    def test_injective_affine_images_of_simplex_clean(self):
        # vertices of a simplex under an injective affine map: every image
        # face keeps a disjoint interior, so no pair may witness a fold
        rng = np.random.default_rng(2)
        for _ in range(10):
            d = int(rng.integers(2, 4))
            pts = rng.normal(size=(d + 1, d))
            A = rng.normal(size=(d + 1, d))
            while np.linalg.matrix_rank(A) < d:
                A = rng.normal(size=(d + 1, d))
            obj = pts @ A.T + rng.normal(size=d + 1)
            filt = build_rips(pairwise_distances(PointCloud(pts)), np.inf, maxdim=d)
            verdict = check_s2(filt, obj, pair_dim="all")
            assert not verdict.violated

    def test_witnesses_replay_within_tolerance(self):
        pc = sample_pareto(PROBLEMS["dtlz5"], 150, seed=4)
        dm = pairwise_distances(pc)
        filt = build_rips(dm, 0.4, maxdim=2)
        verdict = check_s2(filt, pc.objectives)
        assert verdict.violated
        for w in verdict.witnesses:
            lhs = w.a @ pc.objectives[list(w.sigma)]
            rhs = w.b @ pc.objectives[list(w.tau)]
            assert np.abs(lhs - rhs).max() <= 1e-7
            assert abs(w.a.sum() - 1) <= 1e-9 and abs(w.b.sum() - 1) <= 1e-9
            assert w.a.min() > 0 and w.b.min() > 0

    def test_pair_dim_validation(self):
        filt, obj = segments_complex([[0, 0], [1, 1], [0, 1], [1, 0]])
        with pytest.raises(ValueError):
            check_s2(filt, obj, pair_dim=5)

    def test_budget_truncation_flag(self):
        rng = np.random.default_rng(3)
        pc = PointCloud(rng.random((40, 2)), rng.random((40, 2)))
        filt = build_rips(pairwise_distances(pc), 1.5, maxdim=1)
        verdict = check_s2(filt, pc.objectives, simplex_budget=10, pair_budget=5)
        assert verdict.truncated


class TestAnalyze:
    def test_med_full_problem_clean(self):
        pc = sample_pareto(PROBLEMS["med"], 150, seed=0)
        report = analyze(pc, AnalysisConfig(bootstrap=30, seed=0))
        full = report.full
        assert full.status == "ok"
        assert not full.s1.violated
        assert not full.s2.violated
        assert full.estimate is not None and full.estimate.consistent

    def test_singleton_subsets_insufficient(self):
        pc = sample_pareto(PROBLEMS["med"], 60, seed=1)
        report = analyze(pc, AnalysisConfig(bootstrap=10, seed=1, subsets=1))
        for size_one in [(i,) for i in range(6)]:
            sub = report.results[size_one]
            assert sub.status == "insufficient sample"
            assert sub.n_points == 1
            # the lone survivor is the sample argmin of that objective
            keep = brute_non_dominated(pc.objectives, list(size_one))
            assert keep.size == 1
        assert report.results[tuple(range(6))].status == "ok"

    def test_delta_override_skips_band(self):
        pc = sample_pareto(PROBLEMS["med"], 80, seed=2)
        report = analyze(pc, AnalysisConfig(delta=0.5, seed=2))
        full = report.full
        assert full.delta_used == 0.5
        assert full.band is None and full.delta_overridden
        assert "bootstrap_band" not in full.timings

    def test_without_objectives_s1_only(self):
        rng = np.random.default_rng(4)
        pc = PointCloud(rng.random((30, 2)))
        report = analyze(pc, AnalysisConfig(bootstrap=10, seed=0))
        full = report.full
        assert full.subset is None
        assert full.s1 is not None and full.s2 is None

    def test_s2_requires_objectives(self):
        pc = PointCloud(np.random.default_rng(5).random((10, 2)))
        with pytest.raises(ValueError, match="requires objectives"):
            analyze(pc, AnalysisConfig(run_s2=True))

    def test_deterministic_given_seed(self):
        pc = sample_pareto(PROBLEMS["dtlz7"], 100, seed=3)
        r1 = analyze(pc, AnalysisConfig(bootstrap=20, seed=9))
        r2 = analyze(pc, AnalysisConfig(bootstrap=20, seed=9))
        f1, f2 = r1.full, r2.full
        assert f1.delta_used == f2.delta_used
        assert f1.s1.betti == f2.s1.betti
        assert f1.s2.pairs_checked == f2.s2.pairs_checked
        assert f1.band.c == f2.band.c

    def test_insufficient_cloud(self):
        pc = PointCloud(np.zeros((1, 3)), np.zeros((1, 2)))
        report = analyze(pc, AnalysisConfig())
        assert report.full.status == "insufficient sample"
