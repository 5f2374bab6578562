import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from depthreg.dataset import Dataset
from depthreg.depth import DepthConfig
from depthreg.errors import InputError
from depthreg.heterotest import (
    SpreadProfiler,
    delta_profile,
    p_value,
    permutation,
    permutation_test,
    t_statistic,
)
from depthreg.metrics import Covariates
from depthreg.simlab import SimulationModel, sample_model
from depthreg.spread import spread_diameter
from depthreg.weights import NeighborCache, WeightSpec


def test_t_statistic_examples():
    assert t_statistic([2.0, 2.0, 2.0]) == 0
    assert t_statistic([1.0, 3.0]) == 1
    assert t_statistic([0.0, 0.0, 3.0]) == 2


@settings(max_examples=50)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=20), st.floats(-100, 100), st.floats(0.1, 10))
def test_t_statistic_shift_and_scale(d, c, k):
    d = np.array(d)
    t = t_statistic(d)
    assert t_statistic(d + c) == pytest.approx(t, rel=1e-6, abs=1e-6)
    assert t_statistic(k * d) == pytest.approx(k * k * t, rel=1e-6, abs=1e-6)


def test_p_value_rules():
    assert p_value(5.0, [1, 2, 3]) == 0
    assert p_value(2.0, [1, 2, 3]) == pytest.approx(1 / 3)
    assert p_value(2.0, [1, 2, 3], "addone") == pytest.approx(3 / 4)
    assert p_value(0.0, [0, 0, 0], "strict") == 0
    assert p_value(0.0, [0, 0, 0], "addone") == 1
    with pytest.raises(InputError):
        p_value(1.0, [1], "exact")


@settings(max_examples=50)
@given(st.floats(0, 10), st.lists(st.floats(0, 10), min_size=1, max_size=30))
def test_p_value_bounds(obs, perm):
    s = p_value(obs, perm, "strict")
    a = p_value(obs, perm, "addone")
    assert 0 <= s <= 1
    assert 1 / (len(perm) + 1) <= a <= 1


def test_profile_matches_generic_path():
    ds = sample_model(SimulationModel(1, 4.0), 60, 3)
    fast = delta_profile(ds)
    cache = NeighborCache(ds.covariates.distance_matrix(), WeightSpec())
    slow = [spread_diameter(cache.local_sample(ds.responses, i)).value for i in range(ds.n)]
    np.testing.assert_allclose(fast, slow, atol=1e-12)


def test_profile_single_observation():
    ds = Dataset(np.array([[1.0, 2.0]]), Covariates(np.array([[0.5]])))
    prof = delta_profile(ds)
    assert prof.tolist() == [0.0]
    assert t_statistic(prof) == 0


def test_duplicated_rows_give_equal_profile_entries():
    rng = np.random.default_rng(0)
    x = rng.uniform(size=(20, 2))
    y = rng.standard_normal((20, 2))
    ds = Dataset(np.vstack([y, y]), Covariates(np.vstack([x, x])))
    prof = delta_profile(ds)
    np.testing.assert_array_equal(prof[:20], prof[20:])


def test_permutations_are_seeded_streams():
    np.testing.assert_array_equal(permutation(3, 7, 50), permutation(3, 7, 50))
    assert not np.array_equal(permutation(3, 7, 50), permutation(3, 8, 50))


def test_constant_responses_are_degenerate():
    ds = Dataset(np.ones((30, 2)), Covariates(np.linspace(0, 1, 30)))
    res = permutation_test(ds, B=20, seed=1)
    assert res.observed_t == 0
    assert res.p_value == 0
    assert res.p_value_as("addone") == 1
    assert res.warnings and "degenerate" in res.warnings[0]


def test_strong_signal_rejects():
    ds = sample_model(SimulationModel(1, 8.0), 200, 12)
    res = permutation_test(ds, B=100, seed=0)
    assert res.p_value <= 0.01


def test_workers_do_not_change_result():
    ds = sample_model(SimulationModel(1, 2.0), 50, 4)
    a = permutation_test(ds, B=12, seed=5, workers=1)
    b = permutation_test(ds, B=12, seed=5, workers=3)
    np.testing.assert_array_equal(a.perm_ts, b.perm_ts)
    assert a.p_value == b.p_value


def test_non_halfspace_kinds_run():
    ds = sample_model(SimulationModel(1, 2.0), 30, 6)
    for kind in ("spatial", "projection", "simplicial"):
        res = permutation_test(ds, kind, DepthConfig(direction_count=32), B=3, seed=0)
        assert 0 <= res.p_value <= 1
        assert res.depth_kind.value == kind


def test_cached_weights_unchanged_under_permutation():
    ds = sample_model(SimulationModel(1, 0.0), 40, 8)
    prof = SpreadProfiler(ds)
    perm = permutation(0, 1, ds.n)
    fresh = NeighborCache(ds.with_responses(ds.responses[perm]).covariates.distance_matrix(), WeightSpec())
    np.testing.assert_array_equal(prof.cache.indices, fresh.indices)
    np.testing.assert_array_equal(prof.cache.weights, fresh.weights)


@pytest.mark.slow
def test_null_p_values_roughly_uniform():
    p = []
    for rep in range(200):
        ds = sample_model(SimulationModel(1, 0.0), 40, 1000 + rep)
        p.append(permutation_test(ds, B=50, seed=rep).p_value)
    assert stats.kstest(p, "uniform").statistic < 0.15


def test_rejects_bad_arguments():
    ds = sample_model(SimulationModel(1, 0.0), 10, 0)
    with pytest.raises(InputError):
        permutation_test(ds, B=0)
    with pytest.raises(InputError):
        permutation_test(ds, seed=-1)
    with pytest.raises(InputError):
        permutation_test(ds, r=1.0)
