import numpy as np
import pytest

from paretotda.pointset import PointCloud, pairwise_distances


def _circle(radius, gap_chord, step_chord, gap_at):
    """Circle sample with one deliberate wide gap and even steps elsewhere."""
    gap = 2 * np.arcsin(gap_chord / (2 * radius))
    rest = 2 * np.pi - gap
    n = int(np.ceil(rest / (2 * np.arcsin(step_chord / (2 * radius)))))
    th = gap_at + gap / 2 + np.arange(n + 1) * rest / n
    return np.stack([radius * np.cos(th), radius * np.sin(th)], axis=1)


def _rotate_onto_axis(pts, target_angle):
    """Rotate so the sample point nearest target_angle lands exactly on it."""
    ang = np.arctan2(pts[:, 1], pts[:, 0])
    diff = np.angle(np.exp(1j * (ang - target_angle)))
    rot = target_angle - ang[np.argmin(np.abs(diff))]
    R = np.array([[np.cos(rot), -np.sin(rot)], [np.sin(rot), np.cos(rot)]])
    return pts @ R.T


def two_circles_cloud():
    """Two side-by-side circles with controlled feature scales.

    Large circle: radius 3.5/sqrt(3) (so its 1-cycle fills near diameter
    3.5), one adjacent gap of chord exactly 0.9, remaining chords ~0.12.
    Small circle: radius 1.8/sqrt(3), one gap of chord exactly 0.4.  Each
    circle has a sample point exactly on the axis joining the centers and
    the centers are placed so the closest cross-circle pair sits at
    exactly 1.3.  Analyze with the diameter capped at 5.0.
    """
    r_large = 3.5 / np.sqrt(3)
    r_small = 1.8 / np.sqrt(3)
    big = _rotate_onto_axis(_circle(r_large, 0.9, 0.12, gap_at=np.pi), 0.0)
    small = _rotate_onto_axis(_circle(r_small, 0.4, 0.096, gap_at=0.0), np.pi)
    small = small + np.array([r_large + 1.3 + r_small, 0.0])
    return PointCloud(np.concatenate([big, small]))


TWO_CIRCLES_CAP = 5.0


@pytest.fixture(scope="session")
def two_circles():
    return two_circles_cloud()


@pytest.fixture(scope="session")
def two_circles_dm(two_circles):
    return pairwise_distances(two_circles)
