"""Benchmark problems, their Pareto-set samplers, and scalarization.

Four problems with known Pareto-set structure exercise the pipeline:

* med: 40 variables, 6 objectives.  f_i(x) = (|x - e_i| / sqrt(2))^p_i
  with p_i = exp((2i - 7) / 5) and e_i the i-th standard basis vector.
  The Pareto set is the 5-simplex spanned by e_1..e_6; the objective map
  embeds it, so no condition is violated.
* gapped-med: med with each objective pushed through the discontinuous
  ramp  t(g) = 2g/3 for g <= 1/2,  2g/3 + 1/3 otherwise.  Same Pareto
  set, discontinuous objectives (an embedding violation that a purely
  metric method is expected to miss).
* dtlz5: 12 variables, 3 objectives, the usual spherical construction
  with theta_2 pinned to pi/4 when the distance block sits at 0.5; the
  objective map is many-to-one on the Pareto set (second position
  variable is redundant).
* dtlz7: 22 variables, 3 objectives; f1 = x1, f2 = x2 and
  f3 = (1+g) (3 - sum f_i/(1+g) (1 + sin 3 pi f_i)) with
  g = 1 + 9 mean(distance block).  The Pareto set splits into four
  rectangular regions of the position plane.

Samplers are analytic: med draws uniformly from the known simplex
(normalized exponentials); the dtlz samplers pin the distance block at
its optimum, draw position variables uniformly, and keep non-dominated
rows.  All randomness flows through a counter-based Philox generator so
streams reproduce across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .pointset import PointCloud, non_dominated_filter

MED_N, MED_M = 40, 6
MED_P = np.exp((2 * np.arange(1, MED_M + 1) - 7) / 5.0)


def _med_base(x: np.ndarray) -> np.ndarray:
    """g_i(x) = (|x - e_i| / sqrt(2))^p_i for the first six basis vectors."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != MED_N:
        raise ValueError(f"med expects {MED_N} variables, got {x.shape[1]}")
    sq = (x * x).sum(axis=1, keepdims=True)  # |x|^2
    d2 = sq - 2.0 * x[:, :MED_M] + 1.0  # |x - e_i|^2
    return (np.sqrt(np.maximum(d2, 0.0) / 2.0)) ** MED_P


def med_eval(x: np.ndarray) -> np.ndarray:
    return np.squeeze(_med_base(x))


def gapped_med_eval(x: np.ndarray) -> np.ndarray:
    g = _med_base(x)
    f = np.where(g <= 0.5, 2.0 * g / 3.0, 2.0 * g / 3.0 + 1.0 / 3.0)
    return np.squeeze(f)


def _check_box(x: np.ndarray, n: int, name: str) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != n:
        raise ValueError(f"{name} expects {n} variables, got {x.shape[1]}")
    if (x < 0).any() or (x > 1).any():
        raise ValueError(f"{name} input outside the unit box")
    return x


def dtlz5_eval(x: np.ndarray) -> np.ndarray:
    x = _check_box(x, 12, "dtlz5")
    g = ((x[:, 2:] - 0.5) ** 2).sum(axis=1)
    t1 = (np.pi / 2.0) * x[:, 0]
    t2 = (np.pi / (4.0 * (1.0 + g))) * (1.0 + 2.0 * g * x[:, 1])
    f = np.stack(
        [
            (1.0 + g) * np.cos(t1) * np.cos(t2),
            (1.0 + g) * np.cos(t1) * np.sin(t2),
            (1.0 + g) * np.sin(t1),
        ],
        axis=1,
    )
    return np.squeeze(f)


def dtlz7_eval(x: np.ndarray) -> np.ndarray:
    x = _check_box(x, 22, "dtlz7")
    g = 1.0 + 9.0 * x[:, 2:].mean(axis=1)
    f12 = x[:, :2]
    h = 3.0 - (f12 / (1.0 + g[:, None]) * (1.0 + np.sin(3.0 * np.pi * f12))).sum(axis=1)
    f = np.concatenate([f12, ((1.0 + g) * h)[:, None]], axis=1)
    return np.squeeze(f)


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    n: int
    m: int
    evaluate: Callable[[np.ndarray], np.ndarray]


PROBLEMS = {
    "med": ProblemSpec("med", MED_N, MED_M, med_eval),
    "gapped-med": ProblemSpec("gapped-med", MED_N, MED_M, gapped_med_eval),
    "dtlz5": ProblemSpec("dtlz5", 12, 3, dtlz5_eval),
    "dtlz7": ProblemSpec("dtlz7", 22, 3, dtlz7_eval),
}


def get_problem(name: str) -> ProblemSpec:
    key = name.lower().replace("_", "-")
    if key not in PROBLEMS:
        raise KeyError(
            f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}"
        )
    return PROBLEMS[key]


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def sample_pareto(
    spec: ProblemSpec, n_points: int, seed: int = 0, oversample: int = 4
) -> PointCloud:
    """Draw n_points from the problem's Pareto set, objectives attached.

    med / gapped-med: uniform on the known simplex via normalized
    exponential draws.  dtlz5: position variables uniform, distance block
    at 0.5 (every such point is Pareto optimal).  dtlz7: position
    variables uniform at ``oversample`` times the target count, distance
    block at 0, then non-dominated rows truncated to n_points; the factor
    doubles automatically (a few times) if filtering leaves too few rows.
    """
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    spec = get_problem(spec.name) if isinstance(spec, ProblemSpec) else get_problem(spec)
    rng = _rng(seed)

    if spec.name in ("med", "gapped-med"):
        w = rng.exponential(size=(n_points, MED_M))
        w /= w.sum(axis=1, keepdims=True)
        x = np.zeros((n_points, MED_N))
        x[:, :MED_M] = w
        return PointCloud(x, np.atleast_2d(spec.evaluate(x)))

    if spec.name == "dtlz5":
        x = np.full((n_points, spec.n), 0.5)
        x[:, :2] = rng.random((n_points, 2))
        f = np.atleast_2d(spec.evaluate(x))
        keep = non_dominated_filter(f)
        if keep.size < n_points:
            raise RuntimeError(
                f"dtlz5 sampler kept {keep.size} of {n_points} rows"
            )
        return PointCloud(x[keep], f[keep])

    # dtlz7: the Pareto region covers roughly a quarter of the position
    # plane, so oversample and filter
    factor = max(2, int(oversample))
    for _ in range(5):
        n_cand = factor * n_points
        x = np.zeros((n_cand, spec.n))
        x[:, :2] = rng.random((n_cand, 2))
        f = np.atleast_2d(spec.evaluate(x))
        keep = non_dominated_filter(f)
        if keep.size >= n_points:
            keep = keep[:n_points]
            return PointCloud(x[keep], f[keep])
        factor *= 2
    raise RuntimeError(
        f"dtlz7 sampler kept only {keep.size} of {n_points} rows even at "
        f"oversample factor {factor // 2}; raise the factor"
    )


def chebyshev_scalarize(fx: np.ndarray, w: np.ndarray, z: np.ndarray) -> float:
    """Weighted Chebyshev value  max_i w_i (fx_i - z_i).

    The weight must be a point of the standard simplex (non-negative,
    summing to 1); z is the reference (ideal) point.
    """
    fx = np.asarray(fx, dtype=float)
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    if w.shape != fx.shape or z.shape != fx.shape:
        raise ValueError("fx, w, z must share one shape")
    if (w < 0).any() or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be non-negative and sum to 1")
    return float(np.max(w * (fx - z)))
