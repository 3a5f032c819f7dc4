"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import hdgauss as hg


@pytest.fixture
def r2_problem():
    mu1 = np.array([1.0, 0.0])
    mu0 = np.array([-1.0, 0.0])
    return hg.make_equal_covariance_problem(mu1, mu0, np.eye(2))


def test_separation_and_frontier(r2_problem):
    sep = hg.separation(r2_problem)
    assert sep["r"] == pytest.approx(2.0)
    assert sep["bayes_risk"] == pytest.approx(0.158655253931457, rel=1e-12)

    frontier = hg.affine_frontier(r2_problem)
    assert frontier.normal[0] == pytest.approx(2.0)
    assert not frontier.degenerate
    assert hg.classify(frontier, np.array([1.0, 0.0])) == 1
    assert hg.classify(frontier, np.array([-1.0, 0.0])) == 0


def test_sampling_is_deterministic(r2_problem):
    a = hg.sample(r2_problem.class1, 100, 7)
    b = hg.sample(r2_problem.class1, 100, 7)
    assert np.array_equal(a, b)
    assert a.shape == (100, 2)


def test_fit_and_risks(r2_problem):
    rng_x1 = hg.sample(r2_problem.class1, 150, 1)
    rng_x0 = hg.sample(r2_problem.class0, 150, 2)
    features = np.vstack([rng_x1, rng_x0])
    labels = [1] * 150 + [0] * 150

    rule = hg.fit_lda_fdr_known_cov(features, labels, np.eye(2), b_p=0.05)
    assert rule.diagnostics.k_fdr_mean >= 1

    exact = hg.exact_affine_risks(rule.normal, rule.center, r2_problem)
    mc = hg.monte_carlo_risks(rule, r2_problem, 200000, 11)
    assert exact["excess"] >= -1e-12
    assert abs(mc["weighted_risk"] - exact["weighted_risk"]) <= 4 * mc["se_weighted"]
    assert mc["excess"] <= mc["learning_error"] + 1e-15


def test_geometry_and_bounds():
    geom = hg.PlaneGeometry(g_norm=2.0, fhat_norm=1.0, alpha=0.3, d0=0.0)
    r = hg.learning_error_lda_2d(geom)
    lower = math.exp(-0.5) * 0.3 / (2 * math.pi)
    assert r >= lower - 1e-9
    bounds = hg.bounds_theorem_geometric(geom)
    assert any(b["name"] == "the1_case4_lower" and b["applicable"] for b in bounds)

    risks = hg.geometry_risks(geom)
    assert risks["learning_error"] == pytest.approx(r, abs=1e-9)
    assert risks["win_probability"] == pytest.approx(
        risks["learning_error"] - risks["excess"], abs=1e-12
    )


def test_bound_values():
    incons = hg.bound_prop_incons(20, 200, 2.0)
    assert incons["value"] == pytest.approx(0.120573326952226, rel=1e-10)
    errlin = hg.bound_prop_errlin(50, 500, 1.0)
    assert errlin["value"] == pytest.approx(0.168592845624702, rel=1e-10)


def test_make_problem_and_haar():
    spec = hg.ProblemSpec()
    spec.p = 64
    spec.q_sparsity = 1.0
    spec.radius_R = 8.0
    spec.separation_r = 2.0
    spec.seed = 3
    problem = hg.make_problem(spec)
    theta = hg.whitened_mean_difference(problem)
    assert np.linalg.norm(theta) >= 2.0 - 1e-9
    assert np.abs(theta).sum() <= 8.0 + 1e-9

    x = np.sin(np.linspace(0, 3, 32))
    coeffs = hg.haar_dwt(x)
    assert np.linalg.norm(coeffs) == pytest.approx(np.linalg.norm(x), rel=1e-12)
    back = hg.haar_idwt(coeffs)
    assert np.allclose(back, x, atol=1e-10)


def test_chaos_and_concentration():
    chaos = hg.QuadChaos(constant=0.0, linear=np.array([3.0, 4.0]), quad=np.array([]))
    draws = hg.chaos_sample(chaos, 200000, 5)
    assert np.std(draws) == pytest.approx(5.0, rel=0.02)
    chi = hg.QuadChaos(constant=0.0, linear=np.array([]), quad=np.array([1.0]))
    assert hg.small_ball_bound_3(chi, 0.1) == pytest.approx(0.178412411615, rel=1e-9)
    assert hg.lipschitz_tail_bound(1.0, 0.0) == 2.0

    bound = hg.domain_decomposition_bound(
        lambda s: s, c0=1.0, c1=1.0, c2=1.0, beta=1.0, mean_delta=0.0, q=0.5
    )
    assert bound > 0.0


def test_validation_errors_surface_as_exceptions(r2_problem):
    with pytest.raises(ValueError):
        hg.bh_select(np.array([1.0]), np.array([1.0]), 0.7)
    unequal = hg.ClassificationProblem(
        hg.GaussianMeasure(np.zeros(2), np.eye(2)),
        hg.GaussianMeasure(np.zeros(2), 2 * np.eye(2)),
        False,
    )
    with pytest.raises(Exception):
        hg.affine_frontier(unequal)
