import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from depthreg.errors import DimensionError, InputError
from depthreg.metrics import (
    Covariates,
    euclidean_distance,
    l2_curve_distance,
    l2_norm,
    principal_scores,
    trapezoid_weights,
)


def test_euclidean_examples():
    assert euclidean_distance([0, 0], [0, 0]) == 0
    assert euclidean_distance([0, 0], [3, 4]) == 5
    assert euclidean_distance([1, 1, 1], [2, 3, 4]) == pytest.approx(np.sqrt(14), abs=1e-12)


def test_euclidean_length_mismatch():
    with pytest.raises(DimensionError):
        euclidean_distance([0, 0], [1, 2, 3])


def test_l2_examples():
    t = np.linspace(0, 1, 11)
    f = np.sin(t)
    assert l2_curve_distance(f, f, t) == 0
    assert l2_curve_distance(np.ones(11), np.zeros(11), t) == pytest.approx(1.0, abs=1e-12)
    dense = np.linspace(0, 1, 2001)
    assert l2_norm(dense, dense) == pytest.approx(np.sqrt(1 / 3), abs=1e-6)


def test_l2_exact_for_piecewise_linear_product():
    # the trapezoid rule integrates a linear integrand exactly
    t = np.array([0.0, 0.3, 1.0])
    f = np.sqrt(t)
    assert l2_curve_distance(f, 0 * f, t) == pytest.approx(np.sqrt(0.5), abs=1e-12)


def test_l2_convergence_order():
    errs = []
    for m in (11, 21, 41, 81):
        t = np.linspace(0, 1, m)
        errs.append(abs(l2_norm(t**2, t) ** 2 - 0.2))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(ratios > 3.5)


def test_nonuniform_grid_weights_sum_to_length():
    g = np.array([0.0, 0.1, 0.5, 2.0])
    assert trapezoid_weights(g).sum() == pytest.approx(2.0)


@pytest.mark.parametrize("grid", [[0.0], [0.0, 0.0, 1.0], [1.0, 0.5], [0.0, np.nan]])
def test_bad_grids(grid):
    with pytest.raises(InputError):
        trapezoid_weights(grid)


def test_curve_grid_mismatch():
    with pytest.raises(DimensionError):
        Covariates(np.zeros((3, 4)), np.linspace(0, 1, 5))


vec = st.lists(st.floats(-100, 100, allow_nan=False), min_size=3, max_size=3)


@settings(max_examples=60)
@given(vec, vec, vec)
def test_metric_axioms(a, b, c):
    ab = euclidean_distance(a, b)
    assert ab == euclidean_distance(b, a)
    assert ab >= 0
    assert euclidean_distance(a, a) == 0
    assert euclidean_distance(a, c) <= ab + euclidean_distance(b, c) + 1e-12 * (1 + ab)


def test_curve_triangle_inequality():
    rng = np.random.default_rng(0)
    t = np.sort(rng.uniform(0, 1, 30))
    for _ in range(50):
        f, g, h = rng.standard_normal((3, 30))
        assert l2_curve_distance(f, h, t) <= l2_curve_distance(f, g, t) + l2_curve_distance(g, h, t) + 1e-12


def test_distance_matrix_matches_pairwise():
    rng = np.random.default_rng(1)
    grid = np.linspace(0, 1, 25)
    curves = rng.standard_normal((6, 25))
    cov = Covariates(curves, grid)
    dm = cov.distance_matrix()
    for i in range(6):
        for j in range(6):
            assert dm[i, j] == pytest.approx(l2_curve_distance(curves[i], curves[j], grid), abs=1e-12)
    np.testing.assert_allclose(cov.distances_to(curves[2]), dm[2], atol=1e-12)


def test_custom_metric():
    cov = Covariates(np.array([[0.0], [1.0], [3.0]]), metric=lambda a, b: float(abs(a - b).sum()) ** 2)
    np.testing.assert_array_equal(cov.distance_matrix()[0], [0, 1, 9])


def test_principal_scores_constant_is_degenerate():
    cov = Covariates(np.full((5, 3), 2.5))
    scores, degenerate = principal_scores(cov)
    assert degenerate
    np.testing.assert_array_equal(scores, 0)


def test_principal_scores_recover_factor():
    # curves b * exp(t) vary along one direction; the first score is affine in b
    grid = np.linspace(0, 1, 50)
    b = np.linspace(0, 1, 20)
    cov = Covariates(b[:, None] * np.exp(grid), grid)
    scores, degenerate = principal_scores(cov)
    assert degenerate  # only one nonzero component
    norm = np.sqrt((np.exp(grid) ** 2) @ trapezoid_weights(grid))
    np.testing.assert_allclose(scores[:, 0], (b - b.mean()) * norm, atol=1e-9)
    np.testing.assert_allclose(scores[:, 1], 0, atol=1e-12)
