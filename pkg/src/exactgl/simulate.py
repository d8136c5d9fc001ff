"""Simulated grouped-regression data with a two-level correlation structure.

Rows of the design are drawn i.i.d. from N(0, Sigma) where Sigma has
compound-symmetry blocks: correlation ``a`` between covariates of the same
group, scaled by ``b`` between covariates of different groups,

    Sigma = B kron C,   B = (1-b) I_K + b 11',   C = (1-a) I_g + a 11'.

Both factors are compound-symmetry matrices with closed-form square
roots, so the sampling factor F = sqrt(B) kron sqrt(C) needs no numeric
factorization.  The true signal puts ones on the first two groups, and
the noise variance is a fixed fraction of the signal variance
beta0' Sigma beta0, giving a high signal-to-noise ratio.

The default benchmark scenarios pair a, b in {0.2, 0.5, 0.8} with group
counts {10, 20, 40, 80}.  Sampling uses numpy's PCG64 generator, so every
dataset is reproducible from its seed.
"""

from dataclasses import dataclass

import numpy as np

from .group_lasso import bound_from_solution, lambda_max
from .problem import Coefficients, GroupedProblem

RNG_NAME = "PCG64"
DEFAULT_AB_GRID = ((0.2, 0.2), (0.2, 0.5), (0.2, 0.8),
                   (0.5, 0.2), (0.5, 0.5), (0.5, 0.8),
                   (0.8, 0.2), (0.8, 0.5), (0.8, 0.8))
DEFAULT_K_LIST = (10, 20, 40, 80)


@dataclass(frozen=True)
class SimulationConfig:
    """Shape, correlation levels, noise fraction, and RNG seed of one dataset."""

    n_samples: int = 50
    n_groups: int = 10
    group_size: int = 10
    a: float = 0.5
    b: float = 0.5
    noise_scale_factor: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if min(self.n_samples, self.n_groups, self.group_size) < 1:
            raise ValueError("n_samples, n_groups, group_size must be >= 1")
        if not (0.0 <= self.a < 1.0 and 0.0 <= self.b < 1.0):
            raise ValueError("correlations a, b must lie in [0, 1)")
        if self.noise_scale_factor < 0:
            raise ValueError("noise_scale_factor must be nonnegative")


def _compound_symmetry_sqrt(m, rho):
    # eigenvalues: 1+(m-1)rho on the ones direction, 1-rho on its complement
    ones_proj = np.full((m, m), 1.0 / m)
    return (np.sqrt(1.0 - rho) * (np.eye(m) - ones_proj)
            + np.sqrt(1.0 + (m - 1) * rho) * ones_proj)


def covariance_factor(config):
    """Symmetric F with F F' = Sigma, from the closed-form block square roots."""
    between = _compound_symmetry_sqrt(config.n_groups, config.b)
    within = _compound_symmetry_sqrt(config.group_size, config.a)
    return np.kron(between, within)


def covariance_matrix(config):
    """Sigma built entry by entry; cross-checks the factorization."""
    between = ((1.0 - config.b) * np.eye(config.n_groups)
               + config.b * np.ones((config.n_groups, config.n_groups)))
    within = ((1.0 - config.a) * np.eye(config.group_size)
              + config.a * np.ones((config.group_size, config.group_size)))
    return np.kron(between, within)


def covariance_factor_cholesky(sigma):
    """Fallback factor for covariances outside the two-level pattern."""
    return np.linalg.cholesky(sigma)


def true_coefficients(config):
    """Ones on the first two groups (or the only group when K = 1)."""
    beta = Coefficients.zeros([config.group_size] * config.n_groups)
    for k in range(min(2, config.n_groups)):
        beta.set_group(k, 1.0)
    return beta


def sample_problem(config):
    """Draw (problem, true coefficients) deterministically from the seed.

    The response is X beta0 plus N(0, c^2) noise with
    c^2 = noise_scale_factor * beta0' Sigma beta0.
    """
    rng = np.random.default_rng(config.seed)
    factor = covariance_factor(config)
    p = config.n_groups * config.group_size
    X = rng.standard_normal((config.n_samples, p)) @ factor
    beta0 = true_coefficients(config)
    signal_var = float(np.sum((factor @ beta0.values) ** 2))
    c = np.sqrt(config.noise_scale_factor * signal_var)
    y = X @ beta0.values + c * rng.standard_normal(config.n_samples)
    problem = GroupedProblem(y, X, [config.group_size] * config.n_groups)
    return problem, beta0


@dataclass
class PenaltyLadder:
    """Strictly decreasing penalties, with matching bounds once solved."""

    values: np.ndarray
    bounds: np.ndarray | None = None

    def __post_init__(self):
        self.values = np.atleast_1d(np.asarray(self.values, dtype=np.float64))
        if np.any(self.values <= 0) or np.any(np.diff(self.values) >= 0):
            raise ValueError("ladder must be strictly decreasing and positive")


def penalty_ladder(problem, length=5):
    """The geometric ladder {lambda_max * 2^-i} for i = 1..length."""
    if length < 1:
        raise ValueError("ladder length must be >= 1")
    top = lambda_max(problem)
    if top == 0.0:
        raise ValueError("lambda_max is zero; the problem is degenerate")
    return PenaltyLadder(values=top * 0.5 ** np.arange(1, length + 1))


def bounds_for_ladder(ladder, solutions):
    """Fill in the constraint bound M = sum_k ||b_k|| matching each rung."""
    if len(solutions) != ladder.values.shape[0]:
        raise ValueError("need one solution per ladder rung")
    bounds = np.array([bound_from_solution(beta) for beta in solutions])
    return PenaltyLadder(values=ladder.values.copy(), bounds=bounds)
