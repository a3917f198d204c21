import numpy as np
import pytest
from fractions import Fraction

from paretotda.lp import StrictFeasibilityProblem, solve_strict_feasibility

from _oracles import rational_strict_feasibility


def two_hull_problem(X, Y):
    """Eq system for 'hull interiors of X-rows and Y-rows intersect'."""
    k, l = X.shape[0], Y.shape[0]
    A = np.concatenate([X.T, -Y.T], axis=1)
    return StrictFeasibilityProblem(
        A, np.zeros(X.shape[1]), list(range(k + l)),
        [list(range(k)), list(range(k, k + l))],
    )


class TestBasics:
    def test_symmetric_optimum(self):
        p = StrictFeasibilityProblem(np.zeros((0, 2)), np.zeros(0), [0, 1], [[0, 1]])
        r = solve_strict_feasibility(p)
        assert r.feasible and r.t_star == pytest.approx(0.5)
        assert r.witness == pytest.approx([0.5, 0.5])

    def test_contradictory_equalities(self):
        p = StrictFeasibilityProblem(
            np.array([[1.0], [1.0]]), np.array([1.0, 0.0]), [0], [[0]]
        )
        r = solve_strict_feasibility(p)
        assert r.status == "infeasible" and not r.feasible

    def test_boundary_touch_is_not_strict(self):
        # shared endpoint forces a zero coefficient: t* = 0, not feasible
        p = two_hull_problem(
            np.array([[0.0, 0.0], [1.0, 0.0]]), np.array([[0.0, 0.0], [0.3, 0.7]])
        )
        r = solve_strict_feasibility(p)
        assert r.status == "optimal" and not r.feasible
        assert abs(r.t_star) <= 1e-9

    def test_crossing_segments(self):
        p = two_hull_problem(
            np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([[0.0, 1.0], [1.0, 0.0]])
        )
        r = solve_strict_feasibility(p)
        assert r.feasible and r.t_star == pytest.approx(0.5)

    def test_group_membership_validation(self):
        with pytest.raises(ValueError, match="two groups"):
            StrictFeasibilityProblem(np.zeros((1, 2)), [0.0], [0, 1], [[0, 1], [1]])
        with pytest.raises(ValueError, match="not in any group"):
            StrictFeasibilityProblem(np.zeros((1, 2)), [0.0], [0, 1], [[0]])

    def test_eps_validation(self):
        p = StrictFeasibilityProblem(np.zeros((0, 2)), np.zeros(0), [0, 1], [[0, 1]])
        with pytest.raises(ValueError):
            solve_strict_feasibility(p, eps=0.0)


class TestWitnessTolerances:
    def test_planted_feasible_instances(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            k, l, m = rng.integers(2, 5), rng.integers(2, 5), rng.integers(1, 4)
            X = rng.normal(size=(k, m))
            Y = rng.normal(size=(l, m))
            a = rng.dirichlet(np.ones(k))
            b = rng.dirichlet(np.ones(l))
            # plant a common interior point
            Y[l - 1] = (a @ X - b[: l - 1] @ Y[: l - 1]) / b[l - 1]
            p = two_hull_problem(X, Y)
            r = solve_strict_feasibility(p)
            assert r.feasible
            assert r.t_star >= min(a.min(), b.min()) - 1e-9
            assert r.max_residual <= 1e-7
            for grp in p.groups:
                assert abs(sum(r.witness[i] for i in grp) - 1.0) <= 1e-9
            assert r.witness.min() >= r.t_star - 1e-9

    def test_scaling_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            k, l, m = 3, 3, 2
            X = rng.normal(size=(k, m))
            Y = rng.normal(size=(l, m))
            p1 = two_hull_problem(X, Y)
            r1 = solve_strict_feasibility(p1)
            scale = float(rng.random() * 10 + 0.1)
            A2 = p1.eq_matrix.copy()
            A2[0] *= scale
            p2 = StrictFeasibilityProblem(A2, p1.eq_rhs, p1.positive_vars, p1.groups)
            r2 = solve_strict_feasibility(p2)
            if "singular" in (r1.status, r2.status):
                continue
            assert r1.feasible == r2.feasible


class TestAgainstExactOracle:
    def test_random_instances(self):
        rng = np.random.default_rng(5)
        checked = 0
        for _ in range(80):
            k = int(rng.integers(2, 5))
            l = int(rng.integers(2, 5))
            m = int(rng.integers(1, 6))
            X = np.round(rng.normal(size=(k, m)), 3)
            Y = np.round(rng.normal(size=(l, m)), 3)
            A = np.concatenate([X.T, -Y.T], axis=1)
            groups = [list(range(k)), list(range(k, k + l))]
            r = solve_strict_feasibility(two_hull_problem(X, Y))
            if r.status == "singular":
                continue
            t_exact = rational_strict_feasibility(A, np.zeros(m), groups, k + l)
            want = t_exact is not None and t_exact > Fraction(1, 10**9)
            assert r.feasible == want
            if r.t_star is not None and t_exact is not None:
                assert r.t_star == pytest.approx(float(t_exact), abs=1e-7)
            checked += 1
        assert checked >= 70
