"""Block coordinate descent for the sparse group lasso via signed subproblems.

The group subproblem here is

    min_x 0.5*||R_k - X_k x||^2 + lam1*||x||_2 + lam2*||x||_1 .

Zero is optimal exactly when ||soft(X_k' R_k, lam2)||_2 <= lam1.  Otherwise,
if the sign pattern s of the optimum were known, the 1-norm term would turn
into the linear shift -lam2*s on the support J = {j : s_j != 0}, and the
problem would reduce to a plain 2-norm-penalized one over the columns in J,
solvable exactly by the same secular equation as the group lasso with
target v = U_J ((X_k)_J' R_k - lam2*s_J).

The sign pattern is not known, so candidates s in {-1,0,+1}^{p_k} are tried
until one is feasible.  Feasibility of a candidate's solution x means

  * sign(x_J) equals s_J coordinate-wise (a coordinate at round-off scale
    counts as zero and fails a nonzero s_j), and
  * every off-support coordinate satisfies the stationarity box
    |(X_k)_j' (R_k - (X_k)_J x_J)| <= lam2: the group-norm term is smooth
    at a nonzero group, so only the 1-norm subgradient is free there.

Exactly one candidate with nonempty support passes both checks once the
zero check has failed, and its solution is the group optimum.  Enumeration
cost grows as 3^{p_k}, so solves are refused for groups larger than
MAX_GROUP_SIZE; near convergence the optimal signs stop changing between
sweeps, so trying last sweep's accepted sign first usually succeeds
immediately.
"""

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import GroupSizeGuardError, SignSearchError
from .group_lasso import SolveOptions, _start_from, _sweep_engine
from .problem import SparseGroupLassoPenalty, soft_threshold
from .secular import LineSearchProblem, f_eval, f_limit, solve_secular
from .spectra import SpectrumCache

MAX_GROUP_SIZE = 12          # 3^12 sign candidates is the practical ceiling
SIGN_ZERO_REL = 1e-12        # |x_j| below this fraction of ||x|| counts as zero
BOUNDARY_SLACK = 1e-10       # absolute round-off slack on the off-support box


def zero_check(g, lam1, lam2):
    """True iff zero minimizes the group subproblem with gradient g = X_k' R_k."""
    return float(np.linalg.norm(soft_threshold(g, lam2))) <= lam1


@dataclass(frozen=True)
class SignVector:
    """Candidate sign pattern over one group; entries in {-1, 0, +1}."""

    signs: tuple

    def __post_init__(self):
        if any(s not in (-1, 0, 1) for s in self.signs):
            raise ValueError("sign entries must be -1, 0, or +1")

    @classmethod
    def from_array(cls, arr):
        return cls(tuple(int(s) for s in arr))

    @property
    def support(self):
        return tuple(j for j, s in enumerate(self.signs) if s != 0)

    def as_array(self):
        return np.array(self.signs, dtype=np.float64)


class SubproblemStatus(Enum):
    FEASIBLE = "feasible"
    NO_ROOT = "no_root"
    INFEASIBLE_SIGN = "infeasible_sign"
    INFEASIBLE_BOUNDARY = "infeasible_boundary"


@dataclass
class SignedSubproblemResult:
    """Outcome of one sign candidate: status, the secular root and full-group
    coefficient vector when a root existed, and how many off-support
    boundary values were accepted inside the round-off slack."""

    status: SubproblemStatus
    r: float | None = None
    alpha: np.ndarray | None = None
    slack_accepts: int = 0


def signed_subproblem(problem, k, residual, sigma, lam1, lam2, spectra):
    """Solve the group subproblem assuming the sign pattern ``sigma``.

    Returns FEASIBLE with the embedded coefficient vector when ``sigma``
    is the optimum's sign pattern; otherwise reports why it was rejected.
    """
    support = sigma.support
    if not support:
        raise ValueError("sign vector must have nonempty support")
    size = int(problem.group_sizes[k])
    Xk = problem.group_matrix(k)
    J = np.array(support, dtype=np.intp)
    sJ = np.array([sigma.signs[j] for j in support], dtype=np.float64)
    XJ = Xk[:, J]
    target = XJ.T @ residual - lam2 * sJ
    spectrum = spectra.gram_spectrum(k, subset=support)
    lsp = LineSearchProblem(spectrum.eigenvalues, spectrum.u @ target, lam1)
    # No finite root either way: f never reaches down to 1, or never exceeds it.
    if f_eval(lsp, 0.0) <= 1.0 or f_limit(lsp) >= 1.0 - 1e-12:
        return SignedSubproblemResult(SubproblemStatus.NO_ROOT)
    sol = solve_secular(lsp)
    alpha_J = spectrum.u.T @ sol.alpha_rotated
    alpha = np.zeros(size)
    alpha[J] = alpha_J

    zero_scale = SIGN_ZERO_REL * float(np.linalg.norm(alpha_J))
    signs_ok = np.all(np.abs(alpha_J) > zero_scale) and np.all(
        np.sign(alpha_J) == sJ)
    if not signs_ok:
        return SignedSubproblemResult(SubproblemStatus.INFEASIBLE_SIGN,
                                      r=sol.r, alpha=alpha)
    slack_accepts = 0
    rest = np.setdiff1d(np.arange(size), J, assume_unique=True)
    if rest.size:
        inner = Xk[:, rest].T @ (residual - XJ @ alpha_J)
        excess = np.abs(soft_threshold(inner, lam2))
        if np.any(excess > BOUNDARY_SLACK):
            return SignedSubproblemResult(SubproblemStatus.INFEASIBLE_BOUNDARY,
                                          r=sol.r, alpha=alpha)
        slack_accepts = int(np.count_nonzero(excess))
    return SignedSubproblemResult(SubproblemStatus.FEASIBLE, r=sol.r,
                                  alpha=alpha, slack_accepts=slack_accepts)


# Lexicographic tie-break ranks +1 before 0 before -1.
_LEX_RANK = {1: 0, 0: 1, -1: 2}


def sign_order(g, lam2, previous=None):
    """Yield every sign pattern once, most promising first.

    The previously accepted pattern (if any) leads, then the sign of the
    soft-thresholded gradient, then everything else by Hamming distance
    from that anchor with lexicographic tie-breaking (+1 < 0 < -1 per
    coordinate).
    """
    g = np.asarray(g, dtype=np.float64)
    anchor = SignVector.from_array(np.sign(soft_threshold(g, lam2)))
    seen = set()
    if previous is not None:
        seen.add(previous.signs)
        yield previous
    if anchor.signs not in seen:
        seen.add(anchor.signs)
        yield anchor
    size = len(anchor.signs)
    for distance in range(1, size + 1):
        ring = []
        for positions in itertools.combinations(range(size), distance):
            others = [tuple(s for s in (-1, 0, 1) if s != anchor.signs[j])
                      for j in positions]
            for replacement in itertools.product(*others):
                signs = list(anchor.signs)
                for j, s in zip(positions, replacement):
                    signs[j] = s
                ring.append(tuple(signs))
        ring.sort(key=lambda signs: tuple(_LEX_RANK[s] for s in signs))
        for signs in ring:
            if signs not in seen:
                seen.add(signs)
                yield SignVector(signs)


def solve_sparse_group_lasso(problem, penalty, options=None, spectra=None,
                             on_sweep=None):
    """Run block coordinate descent for the sparse group lasso.

    Same sweep structure, stopping rule, and return convention as
    solve_group_lasso.  Raises GroupSizeGuardError when any group exceeds
    MAX_GROUP_SIZE, and SignSearchError if sign enumeration for some group
    is exhausted without a feasible candidate (a numerical-tolerance
    failure: exactly one candidate is feasible in exact arithmetic).
    """
    if not isinstance(penalty, SparseGroupLassoPenalty):
        raise TypeError("solve_sparse_group_lasso expects a SparseGroupLassoPenalty")
    biggest = int(problem.group_sizes.max())
    if biggest > MAX_GROUP_SIZE:
        raise GroupSizeGuardError(
            f"group of size {biggest} exceeds the sign-search ceiling "
            f"{MAX_GROUP_SIZE} (3^{biggest} candidates)")
    options = options or SolveOptions()
    spectra = spectra or SpectrumCache(problem)
    beta = _start_from(problem, options)
    lam1, lam2 = penalty.lam1, penalty.lam2
    previous_signs = [None] * problem.n_groups
    slack_total = [0]

    def objective_at(residual, b):
        norms = sum(float(np.linalg.norm(b.group(k))) for k in range(b.n_groups))
        return (0.5 * float(residual @ residual) + lam1 * norms
                + lam2 * float(np.abs(b.values).sum()))

    def update_one(k, residual):
        g = problem.group_matrix(k).T @ residual
        if zero_check(g, lam1, lam2):
            return np.zeros(g.shape[0])
        for candidate in sign_order(g, lam2, previous=previous_signs[k]):
            if not candidate.support:
                continue  # the zero pattern was already ruled out
            result = signed_subproblem(problem, k, residual, candidate,
                                       lam1, lam2, spectra)
            if result.status is SubproblemStatus.FEASIBLE:
                previous_signs[k] = candidate
                slack_total[0] += result.slack_accepts
                return result.alpha
        raise SignSearchError(
            f"no feasible sign pattern for group {k}; tolerances too tight "
            "for this data")

    beta, trace = _sweep_engine(problem, update_one, beta, options,
                                objective_at, on_sweep)
    trace.boundary_slack_accepts = slack_total[0]
    return beta, trace
