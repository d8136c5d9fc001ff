import numpy as np
import pytest

import exactgl as gl
from helpers import SQRT2, TRAP_OPTIMUM, fitted, random_problem, trap_problem


def _trace_is_monotone(trace):
    return np.all(np.diff(trace.objective_per_sweep) <= 1e-12)


def test_group_update_zero_boundary_inclusive():
    rng = np.random.default_rng(1)
    problem = random_problem(rng, sizes=[3])
    cache = gl.SpectrumCache(problem)
    residual = problem.y.copy()
    lam = float(np.linalg.norm(problem.group_matrix(0).T @ residual))
    np.testing.assert_array_equal(
        gl.group_update(problem, 0, residual, lam, cache), np.zeros(3))
    # strictly above the boundary the update is nonzero
    assert np.any(gl.group_update(problem, 0, residual, lam * 0.999, cache))


def test_group_update_trap_case():
    problem, _ = trap_problem()
    cache = gl.SpectrumCache(problem)
    update = gl.group_update(problem, 0, problem.y.copy(), 1.0, cache)
    np.testing.assert_allclose(update, [TRAP_OPTIMUM] * 2, atol=1e-12)


def test_group_update_orthonormal_columns_closed_form():
    # orthonormal X_k: update is (1 - lam/||X_k'R||) X_k'R, the classic shrink
    rng = np.random.default_rng(2)
    for _ in range(10):
        n, q = 12, 3
        A, _ = np.linalg.qr(rng.standard_normal((n, q)))
        problem = gl.GroupedProblem(rng.standard_normal(n), A, [q])
        cache = gl.SpectrumCache(problem)
        residual = rng.standard_normal(n)
        g = A.T @ residual
        lam = 0.5 * np.linalg.norm(g)  # ||g|| = 2 lam
        closed = (1.0 - lam / np.linalg.norm(g)) * g
        np.testing.assert_allclose(
            gl.group_update(problem, 0, residual, lam, cache), closed,
            atol=1e-10)
        np.testing.assert_allclose(closed, 0.5 * g, atol=1e-12)


def test_group_update_zero_iff_gradient_inside_ball():
    rng = np.random.default_rng(3)
    for _ in range(30):
        problem = random_problem(rng)
        cache = gl.SpectrumCache(problem)
        residual = rng.standard_normal(problem.n_samples)
        k = int(rng.integers(problem.n_groups))
        lam = float(rng.uniform(0.2, 2.0))
        update = gl.group_update(problem, k, residual, lam, cache)
        inside = np.linalg.norm(problem.group_matrix(k).T @ residual) <= lam
        assert (not update.any()) == inside


def test_group_update_is_exactly_group_optimal():
    # certify the one-group subproblem at the returned update
    rng = np.random.default_rng(4)
    for _ in range(20):
        problem = random_problem(rng)
        cache = gl.SpectrumCache(problem)
        residual = rng.standard_normal(problem.n_samples)
        k = int(rng.integers(problem.n_groups))
        g_norm = np.linalg.norm(problem.group_matrix(k).T @ residual)
        lam = float(rng.uniform(0.1, 1.0)) * max(g_norm, 0.1)
        update = gl.group_update(problem, k, residual, lam, cache)
        sub = gl.GroupedProblem(residual, problem.group_matrix(k),
                                [int(problem.group_sizes[k])])
        cert = gl.certificate(sub, gl.GroupLassoPenalty(lam),
                              gl.Coefficients(update, sub.group_sizes))
        assert cert.w_norm <= 1e-8 * (1.0 + g_norm)


def test_lambda_max_values():
    problem, _ = trap_problem()
    assert gl.lambda_max(problem) == pytest.approx(SQRT2, abs=1e-15)
    zero_y = gl.GroupedProblem([0.0, 0.0], np.eye(2), [2])
    assert gl.lambda_max(zero_y) == 0.0
    # response orthogonal to every column
    X = np.array([[1.0], [0.0]])
    orth = gl.GroupedProblem([0.0, 3.0], X, [1])
    assert gl.lambda_max(orth) == 0.0


def test_solve_above_lambda_max_returns_zero_in_one_sweep():
    rng = np.random.default_rng(5)
    problem = random_problem(rng)
    lam = gl.lambda_max(problem) * (1 + 1e-6)
    beta, trace = gl.solve_group_lasso(problem, gl.GroupLassoPenalty(lam))
    assert not beta.values.any()
    assert trace.converged and trace.sweeps == 1
    cert = gl.certificate(problem, gl.GroupLassoPenalty(lam), beta)
    assert cert.w_norm == 0.0


def test_solve_trap_problem():
    problem, penalty = trap_problem()
    beta, trace = gl.solve_group_lasso(problem, penalty)
    np.testing.assert_allclose(beta.values, [TRAP_OPTIMUM] * 2, atol=1e-10)
    assert trace.converged
    assert _trace_is_monotone(trace)


def test_solve_matches_proximal_gradient_reference():
    rng = np.random.default_rng(6)
    for _ in range(5):
        problem = random_problem(rng, sizes=[2, 2, 2], n=20)
        lam = 0.3 * gl.lambda_max(problem)
        penalty = gl.GroupLassoPenalty(lam)
        beta, trace = gl.solve_group_lasso(problem, penalty)
        ref, iters = gl.fista_solve(problem, penalty,
                                    gl.OracleOptions(tol=1e-10))
        assert iters < 200_000
        ours = gl.objective(problem, penalty, beta)
        theirs = gl.objective(problem, penalty, ref)
        assert abs(ours - theirs) <= 1e-6 * (1.0 + abs(theirs))


def test_solve_reports_non_convergence_without_raising():
    rng = np.random.default_rng(7)
    problem = random_problem(rng, sizes=[3, 3], n=15)
    lam = 0.05 * gl.lambda_max(problem)
    beta, trace = gl.solve_group_lasso(
        problem, gl.GroupLassoPenalty(lam),
        gl.SolveOptions(tol=1e-14, max_sweeps=2))
    assert not trace.converged
    assert trace.sweeps == 2
    assert _trace_is_monotone(trace)


def test_fitted_values_unique_across_starting_points():
    rng = np.random.default_rng(8)
    for _ in range(5):
        problem = random_problem(rng)
        lam = 0.4 * gl.lambda_max(problem)
        penalty = gl.GroupLassoPenalty(lam)
        beta_a, _ = gl.solve_group_lasso(problem, penalty)
        start = gl.Coefficients(rng.standard_normal(problem.n_features),
                                problem.group_sizes)
        beta_b, _ = gl.solve_group_lasso(problem, penalty,
                                         gl.SolveOptions(initial=start))
        assert np.max(np.abs(fitted(problem, beta_a)
                             - fitted(problem, beta_b))) <= 1e-5
        for k in range(problem.n_groups):
            ga, gb = beta_a.group(k), beta_b.group(k)
            na, nb = np.linalg.norm(ga), np.linalg.norm(gb)
            if na > 1e-8 and nb > 1e-8:
                np.testing.assert_allclose(ga / na, gb / nb, atol=1e-5)


def test_solve_path_warm_start():
    rng = np.random.default_rng(9)
    problem = random_problem(rng, sizes=[2, 3, 2], n=25)
    top = gl.lambda_max(problem)
    lambdas = top * 0.5 ** np.arange(1, 6)
    results = gl.solve_path(problem, lambdas)
    assert [lam for lam, _, _ in results] == pytest.approx(list(lambdas))
    # the coldest rung solved directly agrees in fitted values
    cold, _ = gl.solve_group_lasso(problem, gl.GroupLassoPenalty(lambdas[-1]))
    warm = results[-1][1]
    assert np.max(np.abs(fitted(problem, cold) - fitted(problem, warm))) <= 1e-5


def test_solve_path_single_rung_equals_solve():
    rng = np.random.default_rng(10)
    problem = random_problem(rng)
    lam = 0.5 * gl.lambda_max(problem)
    (lam_out, beta_path, _), = gl.solve_path(problem, [lam])
    beta, _ = gl.solve_group_lasso(problem, gl.GroupLassoPenalty(lam))
    assert lam_out == lam
    np.testing.assert_allclose(beta_path.values, beta.values, atol=1e-14)


def test_solve_path_rejects_bad_sequences():
    rng = np.random.default_rng(11)
    problem = random_problem(rng)
    with pytest.raises(ValueError):
        gl.solve_path(problem, [])
    with pytest.raises(ValueError):
        gl.solve_path(problem, [1.0, 1.0])
    with pytest.raises(ValueError):
        gl.solve_path(problem, [0.5, 1.0])
    with pytest.raises(ValueError):
        gl.solve_path(problem, [1.0, -0.5])


def test_bound_from_solution():
    assert gl.bound_from_solution(gl.Coefficients.zeros([2, 2])) == 0.0
    trap = gl.Coefficients([TRAP_OPTIMUM, TRAP_OPTIMUM], [2])
    assert gl.bound_from_solution(trap) == pytest.approx(SQRT2 - 1.0, abs=1e-12)
    two_units = gl.Coefficients([1.0, 0.0, 0.6, 0.8], [2, 2])
    assert gl.bound_from_solution(two_units) == pytest.approx(2.0, abs=1e-12)


def test_lambda_max_threshold_behaviour():
    rng = np.random.default_rng(12)
    for _ in range(10):
        problem = random_problem(rng)
        top = gl.lambda_max(problem)
        if top == 0.0:
            continue
        above, _ = gl.solve_group_lasso(problem,
                                        gl.GroupLassoPenalty(top * (1 + 1e-6)))
        assert not above.values.any()
        below, _ = gl.solve_group_lasso(problem,
                                        gl.GroupLassoPenalty(top * (1 - 1e-2)))
        assert below.values.any()
