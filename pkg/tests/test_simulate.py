import numpy as np
import pytest

import exactgl as gl
from helpers import SQRT2, TRAP_OPTIMUM, trap_problem

AB_PAIRS = [(a, b) for a in (0.2, 0.5, 0.8) for b in (0.2, 0.5, 0.8)]


def test_identity_covariance_when_uncorrelated():
    config = gl.SimulationConfig(n_groups=3, group_size=2, a=0.0, b=0.0)
    np.testing.assert_allclose(gl.covariance_factor(config), np.eye(6),
                               atol=1e-14)
    np.testing.assert_allclose(gl.covariance_matrix(config), np.eye(6),
                               atol=1e-14)


def test_factor_reconstructs_covariance():
    config = gl.SimulationConfig(n_groups=3, group_size=2, a=0.5, b=0.2)
    F = gl.covariance_factor(config)
    sigma = gl.covariance_matrix(config)
    assert np.max(np.abs(F @ F.T - sigma)) <= 1e-10


def test_covariance_eigenvalues_bounded_below():
    # eigenvalues of a Kronecker product are products of the factors'
    for a, b in AB_PAIRS:
        config = gl.SimulationConfig(n_groups=4, group_size=3, a=a, b=b)
        eigs = np.linalg.eigvalsh(gl.covariance_matrix(config))
        assert eigs.min() >= (1 - a) * (1 - b) - 1e-10


def test_cholesky_fallback_cross_checks_factor():
    config = gl.SimulationConfig(n_groups=3, group_size=2, a=0.5, b=0.2)
    sigma = gl.covariance_matrix(config)
    L = gl.covariance_factor_cholesky(sigma)
    assert np.max(np.abs(L @ L.T - sigma)) <= 1e-10


def test_config_validation():
    with pytest.raises(ValueError):
        gl.SimulationConfig(a=1.0, b=0.2)
    with pytest.raises(ValueError):
        gl.SimulationConfig(a=0.2, b=-0.1)
    with pytest.raises(ValueError):
        gl.SimulationConfig(n_samples=0)


def test_noise_variance_formula():
    # beta0' Sigma beta0 over the two active groups: (2 + 2b) * (g + g(g-1)a)
    config = gl.SimulationConfig(n_groups=10, group_size=10, a=0.5, b=0.5)
    beta0 = gl.true_coefficients(config)
    quad = float(beta0.values @ gl.covariance_matrix(config) @ beta0.values)
    assert quad == pytest.approx((2 + 2 * 0.5) * (10 + 90 * 0.5), abs=1e-9)
    assert 0.01 * quad == pytest.approx(1.65, abs=1e-10)

    plain = gl.SimulationConfig(n_groups=5, group_size=10, a=0.0, b=0.0)
    beta0 = gl.true_coefficients(plain)
    quad = float(beta0.values @ gl.covariance_matrix(plain) @ beta0.values)
    assert 0.01 * quad == pytest.approx(0.2, abs=1e-12)


def test_sampling_is_deterministic():
    config = gl.SimulationConfig(n_groups=3, group_size=2, a=0.5, b=0.2,
                                 n_samples=8, seed=123)
    p1, b1 = gl.sample_problem(config)
    p2, b2 = gl.sample_problem(config)
    assert np.array_equal(p1.design, p2.design)
    assert np.array_equal(p1.y, p2.y)
    assert np.array_equal(b1.values, b2.values)
    other = gl.sample_problem(gl.SimulationConfig(
        n_groups=3, group_size=2, a=0.5, b=0.2, n_samples=8, seed=124))[0]
    assert not np.array_equal(p1.design, other.design)


def test_sample_shapes_and_truth():
    config = gl.SimulationConfig(n_samples=50, n_groups=10, group_size=10,
                                 a=0.2, b=0.8, seed=5)
    problem, beta0 = gl.sample_problem(config)
    assert problem.design.shape == (50, 100)
    np.testing.assert_array_equal(beta0.group(0), np.ones(10))
    np.testing.assert_array_equal(beta0.group(1), np.ones(10))
    assert not beta0.values[20:].any()


def test_empirical_covariance_converges():
    config = gl.SimulationConfig(n_samples=20_000, n_groups=3, group_size=2,
                                 a=0.5, b=0.2, seed=7)
    problem, _ = gl.sample_problem(config)
    empirical = problem.design.T @ problem.design / config.n_samples
    assert np.max(np.abs(empirical - gl.covariance_matrix(config))) <= 0.05


def test_penalty_ladder_values():
    problem, _ = trap_problem()
    ladder = gl.penalty_ladder(problem, 5)
    np.testing.assert_allclose(
        ladder.values, SQRT2 * 0.5 ** np.arange(1, 6), atol=1e-14)
    short = gl.penalty_ladder(problem, 1)
    np.testing.assert_allclose(short.values, [SQRT2 / 2], atol=1e-15)
    assert np.all(np.diff(ladder.values) < 0)


def test_penalty_ladder_degenerate_problem():
    zero_y = gl.GroupedProblem([0.0, 0.0], np.eye(2), [2])
    with pytest.raises(ValueError):
        gl.penalty_ladder(zero_y)
    with pytest.raises(ValueError):
        gl.penalty_ladder(trap_problem()[0], 0)


def test_ladder_validation():
    with pytest.raises(ValueError):
        gl.PenaltyLadder(values=np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        gl.PenaltyLadder(values=np.array([1.0, -0.5]))


def test_bounds_for_ladder():
    problem, _ = trap_problem()
    ladder = gl.PenaltyLadder(values=np.array([2.0, 1.0]))  # first >= lambda_max
    solutions = []
    for lam in ladder.values:
        beta, _ = gl.solve_group_lasso(problem, gl.GroupLassoPenalty(lam))
        solutions.append(beta)
    filled = gl.bounds_for_ladder(ladder, solutions)
    assert filled.bounds[0] == 0.0
    assert filled.bounds[1] == pytest.approx(SQRT2 - 1.0, abs=1e-9)
    with pytest.raises(ValueError):
        gl.bounds_for_ladder(ladder, solutions[:1])


def test_bounds_nondecreasing_along_simulated_path():
    config = gl.SimulationConfig(n_samples=30, n_groups=4, group_size=3,
                                 a=0.5, b=0.2, seed=11)
    problem, _ = gl.sample_problem(config)
    ladder = gl.penalty_ladder(problem, 5)
    results = gl.solve_path(problem, ladder.values)
    filled = gl.bounds_for_ladder(ladder, [b for _, b, _ in results])
    # informational on typical instances; holds on this seed
    assert np.all(np.diff(filled.bounds) >= -1e-12)
