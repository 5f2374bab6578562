import importlib

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from depthreg.depth import DepthConfig, DepthKind
from depthreg.errors import DegenerateScaleError, DimensionError, InputError
from depthreg.weights import WeightedLocalSample

from oracles import halfspace1d_bruteforce, halfspace2d_bruteforce, simplicial_bruteforce

# the package re-exports a ``depth`` function that shadows the submodule name
D = importlib.import_module("depthreg.depth")

DIAMOND = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])
CFG = DepthConfig()
KINDS = ["halfspace", "spatial", "projection", "simplicial"]


def uniform(points):
    return WeightedLocalSample.uniform(np.asarray(points, float))


def random_sample(rng, m, p, integer=False):
    if integer:
        pts = rng.integers(-3, 4, (m, p)).astype(float)
    else:
        pts = rng.standard_normal((m, p))
    w = rng.uniform(0.1, 1.0, m)
    return WeightedLocalSample(pts, w / w.sum())


# -- known values --------------------------------------------------------------

def test_halfspace_diamond_center():
    assert D.halfspace_depth([0, 0], uniform(DIAMOND)) == pytest.approx(0.5, abs=1e-12)


def test_halfspace_diamond_atoms():
    s = uniform(DIAMOND)
    np.testing.assert_allclose(D.halfspace_depths(DIAMOND, s), 0.25, atol=1e-12)


def test_halfspace_outside_is_zero():
    assert D.halfspace_depth([5, 5], uniform(DIAMOND)) == 0.0


def test_spatial_values():
    s = uniform(DIAMOND)
    assert D.spatial_depth([0, 0], s) == pytest.approx(1.0, abs=1e-12)
    # at (1, 0) the three unit vectors to the other atoms sum to (1 + sqrt2, 0)
    assert D.spatial_depth(DIAMOND[0], s) == pytest.approx(1 - (1 + np.sqrt(2)) / 4, abs=1e-12)
    two = uniform([[1.0, 0], [-1, 0]])
    assert D.spatial_depth([0, 1], two) == pytest.approx(1 - np.sqrt(2) / 2, abs=1e-12)


def test_projection_one_dimensional():
    s = uniform([[0.0], [1.0], [2.0]])
    # median 1, MAD 1: depth = 1 / (1 + |y - 1|)
    vals = D.projection_depths([[1.0], [0.0], [3.0]], s)
    np.testing.assert_allclose(vals, [1.0, 0.5, 1 / 3], atol=1e-12)


def test_projection_zero_mad_raises():
    with pytest.raises(DegenerateScaleError):
        D.projection_depth([0, 0], uniform(DIAMOND))


def test_simplicial_square_center():
    sq = np.array([[1.0, 1], [-1, 1], [-1, -1], [1, -1]])
    assert D.simplicial_depth([0, 0], uniform(sq)) == pytest.approx(1.0)


def test_simplicial_needs_enough_atoms():
    with pytest.raises(InputError):
        D.simplicial_depth([0, 0], uniform(DIAMOND[:2]))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        D.halfspace_depth([0, 0, 0], uniform(DIAMOND))


def test_kind_parse():
    assert DepthKind.parse("Spatial") is DepthKind.SPATIAL
    with pytest.raises(InputError):
        DepthKind.parse("mahalanobis")


def test_exactness_flags():
    assert D.is_exact("halfspace", 2)
    assert not D.is_exact("halfspace", 3)
    assert D.is_exact("simplicial", 3)
    ev = D.evaluate(np.zeros((1, 3)), uniform(np.random.default_rng(0).standard_normal((10, 3))))
    assert ev.approximate


# -- oracle comparisons ----------------------------------------------------------

def test_halfspace2d_matches_bruteforce():
    rng = np.random.default_rng(1)
    for trial in range(30):
        s = random_sample(rng, int(rng.integers(1, 15)), 2, integer=trial % 2 == 0)
        qs = np.vstack([rng.uniform(-3, 3, (10, 2)), s.points[:3]])
        if trial % 2 == 0:
            qs = np.vstack([qs, rng.integers(-3, 4, (5, 2)).astype(float)])
        got = D.halfspace_depths(qs, s)
        want = [halfspace2d_bruteforce(s.points, s.weights, q) for q in qs]
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_halfspace1d_matches_bruteforce():
    rng = np.random.default_rng(2)
    for _ in range(20):
        s = random_sample(rng, 9, 1, integer=True)
        qs = np.arange(-4, 4.5, 0.5)[:, None]
        want = [halfspace1d_bruteforce(s.points[:, 0], s.weights, q[0]) for q in qs]
        np.testing.assert_allclose(D.halfspace_depths(qs, s), want, atol=1e-12)


def test_halfspace3d_upper_bounds_and_converges():
    # direction search can only overestimate the infimum
    rng = np.random.default_rng(3)
    pts = rng.standard_normal((30, 3))
    s = uniform(pts)
    coarse = D.halfspace_depths(pts, s, DepthConfig(direction_count=64))
    fine = D.halfspace_depths(pts, s, DepthConfig(direction_count=4096))
    assert np.all(fine <= coarse + 1e-12)


@pytest.mark.parametrize("p", [2, 3])
def test_simplicial_matches_bruteforce(p):
    rng = np.random.default_rng(4 + p)
    for _ in range(5):
        s = random_sample(rng, 8, p)
        qs = np.vstack([rng.uniform(-1.5, 1.5, (6, p)), s.points[:2]])
        got = D.simplicial_depths(qs, s)
        want = [simplicial_bruteforce(s.points, s.weights, q) for q in qs]
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_in_convex_hull_degenerate():
    seg = np.array([[0.0, 0], [2, 0], [1, 0]])
    assert D.in_convex_hull(seg, np.array([0.5, 0.0]))
    assert not D.in_convex_hull(seg, np.array([0.5, 0.1]))
    assert not D.in_convex_hull(seg, np.array([2.5, 0.0]))


def test_weighted_lower_median():
    assert D.weighted_lower_median([3.0, 1.0, 2.0], [1 / 3] * 3) == 2.0
    # mass exactly 1/2 at the lower value picks it
    assert D.weighted_lower_median([1.0, 2.0], [0.5, 0.5]) == 1.0


# -- invariance properties ------------------------------------------------------

coords = st.floats(-5, 5, allow_nan=False, width=64)


def _hyp_sample(data, p, lo=4, hi=9):
    m = data.draw(st.integers(lo, hi))
    pts = np.array(data.draw(st.lists(st.lists(coords, min_size=p, max_size=p), min_size=m, max_size=m)))
    w = np.array(data.draw(st.lists(st.floats(0.1, 1.0), min_size=m, max_size=m)))
    return pts, w / w.sum()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_depths_in_unit_interval(data):
    pts, w = _hyp_sample(data, 2)
    s = WeightedLocalSample(pts, w)
    q = np.array(data.draw(st.lists(st.lists(coords, min_size=2, max_size=2), min_size=1, max_size=4)))
    for kind in ("halfspace", "spatial", "simplicial"):
        v = D.depths(q, s, kind)
        assert np.all((v >= 0) & (v <= 1 + 1e-12))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_halfspace_affine_invariance(data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    pts = rng.standard_normal((12, 2))
    w = rng.uniform(0.2, 1, 12)
    s = WeightedLocalSample(pts, w / w.sum())
    A = rng.standard_normal((2, 2))
    if abs(np.linalg.det(A)) < 0.1:
        A += np.eye(2)
    b = rng.standard_normal(2)
    q = rng.standard_normal((5, 2))
    t = WeightedLocalSample(pts @ A.T + b, s.weights)
    np.testing.assert_allclose(D.halfspace_depths(q @ A.T + b, t), D.halfspace_depths(q, s), atol=1e-9)


def test_spatial_similarity_invariance():
    rng = np.random.default_rng(7)
    pts = rng.standard_normal((15, 2))
    s = uniform(pts)
    th = 0.7
    R = 2.5 * np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    q = rng.standard_normal((6, 2))
    t = uniform(pts @ R.T + 1.0)
    np.testing.assert_allclose(D.spatial_depths(q @ R.T + 1.0, t), D.spatial_depths(q, s), atol=1e-9)


@pytest.mark.parametrize("kind", KINDS)
def test_translation_invariance(kind):
    rng = np.random.default_rng(8)
    s = random_sample(rng, 10, 2)
    q = rng.standard_normal((5, 2))
    b = np.array([3.0, -2.0])
    t = WeightedLocalSample(s.points + b, s.weights)
    np.testing.assert_allclose(D.depths(q + b, t, kind), D.depths(q, s, kind), atol=1e-12)


def test_projection_p2_grid_is_deterministic():
    rng = np.random.default_rng(9)
    s = uniform(rng.standard_normal((20, 2)))
    q = rng.standard_normal((4, 2))
    a = D.projection_depths(q, s, DepthConfig(rng_seed=1))
    b = D.projection_depths(q, s, DepthConfig(rng_seed=2))
    np.testing.assert_array_equal(a, b)
