import numpy as np
import pytest

from depthreg.depth import DepthConfig, depth_at_points, depths
from depthreg.errors import InputError, UnsupportedDimensionError
from depthreg.regions import (
    alpha_r,
    bounding_box,
    central_region,
    conditional_median,
    contour_2d,
    depth_field,
    hausdorff_distance,
    region_membership,
    trimmed_mean,
)
from depthreg.weights import WeightedLocalSample

DIAMOND = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])


def uniform(points):
    return WeightedLocalSample.uniform(np.asarray(points, float))


def test_alpha_examples():
    w = [1 / 3] * 3
    assert alpha_r([0.9, 0.6, 0.3], w, 0.5) == 0.6
    assert alpha_r([0.9, 0.6, 0.3], w, 0.9) == 0.3
    assert alpha_r([0.4, 0.4, 0.4], w, 0.2) == 0.4


def test_alpha_tie_class():
    # values within 1e-12 count as one level
    assert alpha_r([0.5, 0.5 - 1e-14, 0.1], [0.3, 0.3, 0.4], 0.5) == pytest.approx(0.5 - 1e-14, abs=0)


def test_alpha_rejects_bad_r():
    for r in (0.0, 1.0, -0.1):
        with pytest.raises(InputError):
            alpha_r([0.5], [1.0], r)


def test_region_members_three_atoms():
    s = uniform([[0.0], [1.0], [2.0]])
    reg = central_region(s, "halfspace", r=0.5, depth_values=np.array([0.3, 0.9, 0.6]))
    np.testing.assert_array_equal(reg.member_indices, [1, 2])
    assert reg.alpha == 0.6
    assert reg.member_mass == pytest.approx(2 / 3)


def test_region_full_and_argmax():
    rng = np.random.default_rng(0)
    s = uniform(rng.standard_normal((30, 2)))
    full = central_region(s, r=0.99)
    assert full.member_indices.size == 30
    top = central_region(s, r=1e-6)
    assert np.all(top.depths[top.member_indices] == top.depths.max())


def test_region_invariants_random():
    rng = np.random.default_rng(1)
    for _ in range(40):
        m = int(rng.integers(3, 25))
        pts = rng.integers(-3, 4, (m, 2)).astype(float) if rng.uniform() < 0.5 else rng.standard_normal((m, 2))
        w = rng.uniform(0.1, 1, m)
        s = WeightedLocalSample(pts, w / w.sum())
        dv = depth_at_points(s)
        prev_alpha, prev_members = np.inf, set()
        for r in (0.1, 0.3, 0.5, 0.7, 0.9):
            reg = central_region(s, r=r, depth_values=dv)
            members = set(reg.member_indices.tolist())
            assert reg.member_mass >= r - 1e-12
            assert np.all(dv[reg.member_indices] >= reg.alpha)
            assert np.all(np.delete(dv, reg.member_indices) < reg.alpha)
            assert reg.alpha <= prev_alpha
            assert prev_members <= members
            prev_alpha, prev_members = reg.alpha, members


def test_membership():
    rng = np.random.default_rng(2)
    s = uniform(rng.standard_normal((25, 2)))
    reg = central_region(s, r=0.5)
    deepest = s.points[np.argmax(reg.depths)]
    assert region_membership(deepest, s, alpha=reg.alpha)
    assert not region_membership([50, 50], s, alpha=reg.alpha)


def test_membership_matches_field():
    pts = np.array([[0.0, 0], [2, 0], [0, 2], [2, 2], [1, 1.2]])
    s = uniform(pts)
    reg = central_region(s, r=0.5)
    xs, ys, fld = depth_field(s, resolution=8)
    for i, yv in enumerate(ys):
        for j, xv in enumerate(xs):
            assert region_membership([xv, yv], s, alpha=reg.alpha) == (fld[i, j] >= reg.alpha)


def test_contour_empty_when_alpha_too_high():
    assert contour_2d(uniform(DIAMOND), alpha=0.9) == []


def test_contour_diamond_symmetry():
    s = uniform(DIAMOND)
    box = np.array([[-1.5, 1.5], [-1.5, 1.5]])
    lines = contour_2d(s, alpha=0.25, bbox=box, resolution=60)
    assert len(lines) == 1
    poly = lines[0]
    cell = 3.0 / 60
    # reflecting across either axis or the diagonal maps the contour onto itself
    for transform in (np.array([[-1, 0], [0, 1]]), np.array([[1, 0], [0, -1]]), np.array([[0, 1], [1, 0]])):
        assert hausdorff_distance(poly, poly @ transform.T) <= cell + 1e-9


def test_contour_refinement_stable():
    rng = np.random.default_rng(3)
    s = uniform(rng.standard_normal((200, 2)))
    reg = central_region(s, r=0.5)
    box = bounding_box(s.points)
    counts = []
    for res in (32, 64):
        _, _, fld = depth_field(s, bbox=box, resolution=res)
        counts.append(np.count_nonzero(fld >= reg.alpha) * ((box[:, 1] - box[:, 0]) / res).prod())
    assert abs(counts[1] - counts[0]) / counts[1] < 0.05


def test_contour_rejects_bad_inputs():
    with pytest.raises(UnsupportedDimensionError):
        contour_2d(uniform(np.zeros((3, 3)) + np.arange(3)[:, None]))
    with pytest.raises(InputError):
        contour_2d(uniform(DIAMOND), resolution=4)


def test_median_single_atom():
    m = conditional_median(uniform([[1.5, -2.0]]))
    np.testing.assert_array_equal(m.point, [1.5, -2.0])
    assert m.depth == 1.0


def test_median_spatial_symmetric():
    m = conditional_median(uniform(DIAMOND), "spatial")
    np.testing.assert_allclose(m.point, [0, 0], atol=1e-12)
    assert m.depth == pytest.approx(1.0)


def test_median_one_dimensional():
    m = conditional_median(uniform([[0.0], [1.0], [2.0]]))
    assert m.point[0] == 1.0
    assert m.depth == pytest.approx(2 / 3)


def test_median_dominates_atoms_and_translates():
    rng = np.random.default_rng(5)
    pts = rng.standard_normal((20, 2))
    s = uniform(pts)
    m = conditional_median(s)
    assert m.depth >= depth_at_points(s).max() - 1e-12
    c = np.array([0.5, -3.0])
    mt = conditional_median(uniform(pts + c))
    np.testing.assert_allclose(mt.point, m.point + c, atol=1e-12)


def test_trimmed_mean_examples():
    rng = np.random.default_rng(6)
    pts = rng.standard_normal((15, 2))
    w = rng.uniform(0.1, 1, 15)
    s = WeightedLocalSample(pts, w / w.sum())
    np.testing.assert_allclose(trimmed_mean(s, r=0.0), s.mean(), atol=1e-12)
    for r in (0.1, 0.5, 0.8):
        np.testing.assert_allclose(trimmed_mean(uniform(DIAMOND), r=r), [0, 0], atol=1e-15)


def test_trimmed_mean_three_atoms():
    s = uniform([[0.0], [1.0], [5.0]])
    dv = depth_at_points(s)
    np.testing.assert_allclose(dv, [1 / 3, 2 / 3, 1 / 3])
    # 1 - r = 0.6: the middle atom alone has mass 1/3 < 0.6, so all atoms qualify
    assert trimmed_mean(s, r=0.4)[0] == pytest.approx(2.0)
    # 1 - r = 0.3: the middle atom alone suffices
    assert trimmed_mean(s, r=0.7)[0] == pytest.approx(1.0)


def test_trimmed_mean_rejects_r_one():
    with pytest.raises(InputError):
        trimmed_mean(uniform(DIAMOND), r=1.0)


def test_hausdorff_examples():
    a = np.array([[0.0, 0], [1, 0]])
    assert hausdorff_distance(a, a) == 0
    assert hausdorff_distance([0.0], [3.0]) == 3
    assert hausdorff_distance(a, [[0.0, 1]]) == pytest.approx(np.sqrt(2))


def test_region_translation_equivariance():
    rng = np.random.default_rng(7)
    pts = rng.standard_normal((25, 2))
    a = central_region(uniform(pts), r=0.5)
    b = central_region(uniform(pts + [10.0, -4.0]), r=0.5)
    np.testing.assert_array_equal(a.member_indices, b.member_indices)


def test_projection_region_runs():
    rng = np.random.default_rng(8)
    s = uniform(rng.standard_normal((30, 2)))
    reg = central_region(s, "projection", DepthConfig(direction_count=64), r=0.5)
    assert reg.member_mass >= 0.5 - 1e-12
    np.testing.assert_allclose(reg.depths, depths(s.points, s, "projection", DepthConfig(direction_count=64)))
