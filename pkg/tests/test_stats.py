import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riemstats import (
    DataTable,
    DegenerateVarianceError,
    FrechetMean,
    PipelineConfig,
    correlation_circle,
    correlation_matrix,
    covariance,
    frechet_mean,
    pearson_correlation_matrix,
    rho_factor,
    riemannian_correlation,
    riemannian_subtract,
    run,
)
from riemstats.data import InputError
from riemstats.neighbors import pairwise_euclidean


def test_rho_factor_cases():
    assert rho_factor(2.0, 1.0) == 2.0
    assert rho_factor(0.0, 0.0) == 1.0
    assert rho_factor(3.0, 3.0) == 1.0


def test_subtract():
    a, b = np.array([3.0, 1.0, -2.0]), np.array([1.0, 1.0, 0.5])
    np.testing.assert_array_equal(riemannian_subtract(a, b, 1.0), a - b)
    np.testing.assert_array_equal(riemannian_subtract(a, a, 7.5), np.zeros(3))
    np.testing.assert_array_equal(riemannian_subtract([2.0, 0.0], [1.0, 0.0], 2.0), [2.0, 0.0])
    with pytest.raises(InputError, match="dimension"):
        riemannian_subtract([1.0, 2.0], [1.0], 1.0)


def brute_frechet(d):
    best, arg = math.inf, -1
    for c in range(len(d)):
        s = sum(d[c][i] ** 2 for i in range(len(d)))
        if s < best:
            best, arg = s, c
    return arg, best


def test_frechet_three_points():
    x = np.array([[0.0], [1.0], [10.0]])
    d = pairwise_euclidean(x)
    m = frechet_mean(d)
    assert m.index == 1 and m.objective == 82.0
    assert brute_frechet(d.tolist()) == (1, 82.0)


def test_frechet_tie_and_degenerate():
    assert frechet_mean(np.array([[0.0, 2.0], [2.0, 0.0]])).index == 0
    m = frechet_mean(np.zeros((4, 4)))
    assert m.index == 0 and m.objective == 0.0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 30), st.booleans())
def test_frechet_matches_brute_force(seed, n, integer):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 3, size=(n, n)).astype(float) if integer else rng.uniform(0, 5, size=(n, n))
    d = np.triu(a, 1)
    d = d + d.T
    assert frechet_mean(d).index == brute_frechet(d.tolist())[0]


def test_covariance_reduces_to_classical(rng):
    for _ in range(20):
        x = rng.normal(size=(20, 4)) * rng.uniform(0.1, 10, size=4)
        t = DataTable.from_array(x)
        cov = covariance(t, FrechetMean.arithmetic(t), rho=np.ones(20))
        assert np.max(np.abs(cov.S - np.cov(x, rowvar=False, bias=True))) < 1e-12


def test_covariance_identical_rows():
    t = DataTable.from_array(np.tile([1.0, 2.0, 3.0], (5, 1)))
    d = np.zeros((5, 5))
    cov = covariance(t, frechet_mean(d, t), d)
    assert np.array_equal(cov.S, np.zeros((3, 3)))
    assert np.array_equal(cov.rho, np.ones(5))


def test_covariance_hand_value():
    t = DataTable.from_array([[0.0], [1.0], [2.0]])
    cov = covariance(t, FrechetMean(1, np.array([1.0]), 2.0), rho=np.ones(3))
    assert cov.S[0, 0] == pytest.approx(2 / 3, abs=1e-15)
    assert np.array_equal(cov.deviations[1], [0.0])


def test_covariance_uses_distance_ratio():
    t = DataTable.from_array([[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]])
    d = np.array([[0.0, 10.0, 2.0], [10.0, 0.0, 9.0], [2.0, 9.0, 0.0]])
    cov = covariance(t, frechet_mean(d, t), d)
    assert cov.mean.index == 2
    # rho_i = d_umap(x_i, g) / |x_i - g|
    np.testing.assert_allclose(cov.rho, [2.0 / 1.0, 9.0 / math.sqrt(18.0), 1.0])
    np.testing.assert_array_equal(cov.deviations[2], [0.0, 0.0])


def test_covariance_needs_rho_for_offsample_mean():
    t = DataTable.from_array(np.arange(6.0).reshape(3, 2))
    with pytest.raises(InputError):
        covariance(t, FrechetMean.arithmetic(t), np.zeros((3, 3)))


def test_correlation_basic():
    x = np.array([[1.0, 2.0, 5.0], [2.0, 4.0, 5.0], [4.0, 8.0, 5.0], [3.0, 6.0, 5.0]])
    t = DataTable.from_array(x)
    d = pairwise_euclidean(x) * np.array([1.0, 1.5, 2.0, 0.5])[None, :]
    d = np.maximum(d, d.T)
    cov = covariance(t, frechet_mean(d, t), d)
    assert riemannian_correlation(cov, 0, 0) == 1.0
    # column 1 = 2 * column 0 with shared row weights
    assert riemannian_correlation(cov, 0, 1) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(DegenerateVarianceError):
        riemannian_correlation(cov, 0, 2)


def test_correlation_matrix_reduces_to_pearson(rng):
    x = rng.normal(size=(30, 5))
    t = DataTable.from_array(x)
    cov = covariance(t, FrechetMean.arithmetic(t), rho=np.ones(30))
    assert np.max(np.abs(correlation_matrix(cov) - np.corrcoef(x, rowvar=False))) < 1e-12


def test_pearson_matrix_cases():
    t = DataTable.from_array([[1.0], [2.0], [3.0]])
    assert pearson_correlation_matrix(t, [[1.0], [2.0], [3.0]])[0, 1] == pytest.approx(1.0, abs=1e-15)
    assert pearson_correlation_matrix(t, [[-1.0], [-2.0], [-3.0]])[0, 1] == pytest.approx(-1.0, abs=1e-15)
    # (1,2,3) vs (1,2,4): cov sum 3, squares 2 and 14/3
    expected = 3 / math.sqrt(2 * (14 / 3))
    r = pearson_correlation_matrix(t, [1.0, 2.0, 4.0])[0, 1]
    assert r == pytest.approx(expected, abs=1e-14)
    assert r == pytest.approx(0.98198, abs=1e-5)
    with pytest.raises(DegenerateVarianceError):
        pearson_correlation_matrix(t, [5.0, 5.0, 5.0])


def test_circle_collinear_variable():
    e = np.array([[0.0, 1.0], [1.0, -1.0], [2.0, 0.5], [3.0, 0.0], [4.0, 2.0]])
    x = np.column_stack([e[:, 0], [3.0, 1.0, 4.0, 1.0, 5.0]])
    t = DataTable.from_array(x)
    cov = covariance(t, FrechetMean(2, x[2].copy(), 0.0), rho=np.ones(5))
    c = correlation_circle(t, e, cov, orthogonalize=True)
    assert c.coords[0, 0] == pytest.approx(1.0, abs=1e-14)
    assert c.coords[0, 1] == pytest.approx(0.0, abs=1e-14)


def test_circle_unorthogonalized_is_pearson(rng):
    x = rng.normal(size=(25, 4))
    e = rng.normal(size=(25, 2))
    t = DataTable.from_array(x)
    cov = covariance(t, FrechetMean.arithmetic(t), rho=np.ones(25))
    c = correlation_circle(t, e, cov, orthogonalize=False)
    ref = pearson_correlation_matrix(x, e)[:4, 4:]
    assert np.max(np.abs(c.coords - ref)) < 1e-12


def test_circle_constant_column():
    x = np.array([[1.0, 2.0], [2.0, 2.0], [3.0, 2.0], [5.0, 2.0]])
    t = DataTable.from_array(x)
    cov = covariance(t, FrechetMean.arithmetic(t), rho=np.ones(4))
    with pytest.raises(DegenerateVarianceError):
        correlation_circle(t, np.arange(8.0).reshape(4, 2) ** 2, cov)


def test_circle_dependent_components_warns():
    x = np.array([[1.0, 0.0], [2.0, 1.0], [0.0, 3.0], [4.0, 1.0]])
    e = np.column_stack([np.arange(4.0), 2 * np.arange(4.0)])
    t = DataTable.from_array(x)
    cov = covariance(t, FrechetMean.arithmetic(t), rho=np.ones(4))
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        c = correlation_circle(t, e, cov)
    assert rec and c.warnings
    assert np.all(c.coords[:, 1] == 0.0)


def test_students_disk(students):
    res = run(students)
    assert np.max(np.sum(res.circle.coords**2, axis=1)) <= 1 + 1e-12
    assert res.circle.orthogonalized


def test_orthogonalization_keeps_plane(students):
    res = run(students)
    e = res.embedding.coords
    v = res.cov.rho[:, None] * (e - e[res.mean.index])
    B = res.circle.basis
    np.testing.assert_allclose(B.T @ B, np.eye(2), atol=1e-12)
    # both original component vectors lie in span(B)
    resid = v - B @ (B.T @ v)
    assert np.max(np.abs(resid)) < 1e-9 * np.max(np.abs(v))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(6, 40), st.integers(2, 8))
def test_psd_and_correlation_bounds(seed, n, p):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, p)) @ rng.normal(size=(p, p))
    t = DataTable.from_array(x)
    res = run(t, PipelineConfig(k=min(4, n - 1), n_epochs=5, seed=seed % 1000))
    assert np.linalg.eigvalsh(res.cov.S).min() >= -1e-10
    assert np.all(np.abs(res.R) <= 1 + 1e-12)
    assert np.all(np.sum(res.circle.coords**2, axis=1) <= 1 + 1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_permutation_equivariance(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(15, 3))
    perm = rng.permutation(15)
    t1 = DataTable.from_array(x)
    t2 = DataTable.from_array(x[perm], row_labels=[t1.row_labels[i] for i in perm])
    cfg = PipelineConfig(k=4, n_epochs=1)
    a, b = run(t1, cfg), run(t2, cfg)
    if np.sum(a.mean.objective == np.sum(a.distances.values**2, axis=1)) > 1:
        return  # tied medoids may resolve differently
    assert t1.row_labels[a.mean.index] == t2.row_labels[b.mean.index]
    np.testing.assert_allclose(b.cov.rho, a.cov.rho[perm], rtol=1e-12)
    np.testing.assert_allclose(b.cov.deviations, a.cov.deviations[perm], rtol=1e-12, atol=1e-15)
    assert np.max(np.abs(a.cov.S - b.cov.S)) <= 1e-12


def test_pearson_baseline_leaves_disk(students):
    # the classical coefficient against two correlated layout axes is not bounded
    res = run(students, baseline_pearson=True)
    assert np.max(np.sum(res.pearson**2, axis=1)) > 1.0
    assert np.max(np.sum(res.circle.coords**2, axis=1)) <= 1 + 1e-12
