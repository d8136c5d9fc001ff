"""Exact group-wise coordinate descent for the group lasso and sparse group lasso.

The group lasso objective 0.5*||y - X b||^2 + lam * sum_k ||b_k||_2 is
minimized by cycling through the coefficient groups and setting each to
its exact optimum given the others, found by a single univariate root
find on a secular equation in the eigenbasis of the group's Gram matrix.
The sparse variant adds a 1-norm penalty and recovers the same exact
update by searching over the optimum's sign pattern within the group.

Also here: subgradient optimality certificates with computable error
bounds on the fitted values, warm-started penalty paths, an independent
proximal-gradient reference solver, a dense-grid ground truth for tiny
problems, and a simulated-data generator with two-level correlation
structure.
"""

from .baselines import (OracleOptions, fista_solve, grid_refine,
                        lipschitz_constant, prox_group_norm, prox_sparse_group)
from .certificates import (AccuracyBounds, OptimalityCertificate,
                           accuracy_bounds, certificate, ls_quantities)
from .errors import (DimensionMismatchError, GroupSizeGuardError,
                     SecularRootError, SignSearchError)
from .group_lasso import (SolveOptions, SolveTrace, bound_from_solution,
                          group_update, lambda_max, solve_group_lasso,
                          solve_path)
from .problem import (Coefficients, GroupedProblem, GroupLassoPenalty,
                      SparseGroupLassoPenalty, objective, partial_residual,
                      penalty_term, soft_threshold)
from .secular import (LineSearchProblem, LineSearchResult, f_derivative,
                      f_eval, f_limit, solve_secular)
from .simulate import (PenaltyLadder, SimulationConfig, bounds_for_ladder,
                       covariance_factor, covariance_factor_cholesky,
                       covariance_matrix, penalty_ladder, sample_problem,
                       true_coefficients)
from .sparse_group_lasso import (SignedSubproblemResult, SignVector,
                                 SubproblemStatus, sign_order,
                                 signed_subproblem, solve_sparse_group_lasso,
                                 zero_check)
from .spectra import CacheStats, GroupSpectrum, SpectrumCache

__version__ = "0.1.0"

__all__ = [
    "AccuracyBounds", "CacheStats", "Coefficients", "DimensionMismatchError",
    "GroupLassoPenalty", "GroupSizeGuardError", "GroupSpectrum",
    "GroupedProblem", "LineSearchProblem", "LineSearchResult",
    "OptimalityCertificate", "OracleOptions", "PenaltyLadder",
    "SecularRootError", "SignSearchError", "SignVector",
    "SignedSubproblemResult", "SimulationConfig", "SolveOptions", "SolveTrace",
    "SparseGroupLassoPenalty", "SpectrumCache", "SubproblemStatus",
    "accuracy_bounds", "bound_from_solution", "bounds_for_ladder",
    "certificate", "covariance_factor", "covariance_factor_cholesky",
    "covariance_matrix", "f_derivative", "f_eval", "f_limit", "fista_solve",
    "grid_refine", "group_update", "lambda_max", "lipschitz_constant",
    "ls_quantities", "objective", "partial_residual", "penalty_ladder",
    "penalty_term", "prox_group_norm", "prox_sparse_group", "sample_problem",
    "sign_order", "signed_subproblem", "soft_threshold", "solve_group_lasso",
    "solve_path", "solve_secular", "solve_sparse_group_lasso",
    "true_coefficients", "zero_check",
]
