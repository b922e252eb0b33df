"""Sparse recovery of a state matrix from a stationary covariance.

Among all matrices consistent with an observed covariance (the affine
space characterized by ``solution_space``), the reconstruction picks the
one minimizing a weighted entrywise 1-norm, the usual convex surrogate
for edge count.  The weight matrix doubles as the prior interface: a
weight of zero exempts an entry from the penalty, which is how known
edges (for instance from transfer-entropy screening) and the diagonal
are expressed.

Entry (i, j) of the state matrix is the coupling from variable j onto
variable i, so a directed edge source -> target corresponds to entry
(target, source).

The minimization is posed as a linear program over (t, v) with
v = vec(A) and one envelope variable per entry:

    minimize    sum(t)
    subject to  M v = b                (covariance membership)
                -t + Z.v <= 0, -t - Z.v <= 0   (t >= |Z.v| entrywise)

where Z.v is the elementwise product with the vectorized weights.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .errors import IndexOutOfRangeError, SelfLoopInPriorsError
from .linalg import (
    check_covariance,
    empirical_covariance,
    is_hurwitz,
    spectral_decompose,
    unvec,
    vec,
)
from .lp import IterationRecord, LpProblem, LpSolution, solve_lp
from .solution_space import ConstraintSystem, build_constraints, membership_residual


def prior_weights(n: int, edges=None, diag_weight: float = 0.0) -> np.ndarray:
    """Penalty weight matrix: 1 for candidate entries, 0 for exempt ones.

    ``edges`` is an iterable of (source, target) pairs to exempt, or an
    object exposing such pairs via an ``edges`` attribute.  The diagonal
    gets ``diag_weight``; self-regulation is part of any stable model, so
    it is unpenalized by default.
    """
    weights = np.ones((n, n))
    np.fill_diagonal(weights, diag_weight)
    if edges is None:
        return weights
    pairs = getattr(edges, "edges", edges)
    for source, target in pairs:
        if not (0 <= source < n and 0 <= target < n):
            raise IndexOutOfRangeError(
                f"edge ({source}, {target}) out of range for n={n}"
            )
        if source == target:
            raise SelfLoopInPriorsError(
                f"self loop ({source}, {target}) is not a valid prior; "
                "diagonal handling is controlled by diag_weight"
            )
        weights[target, source] = 0.0
    return weights


def assemble_lp(cs: ConstraintSystem, weights: np.ndarray) -> LpProblem:
    """Build the envelope LP for a constraint system and penalty weights."""
    n = cs.n
    nn = n * n
    z = vec(np.asarray(weights, dtype=float))
    if z.shape[0] != nn:
        raise IndexOutOfRangeError(f"weights must be {n} x {n}, got {weights.shape}")
    a_eq = scipy.sparse.hstack(
        [scipy.sparse.csr_matrix((cs.M.shape[0], nn)), cs.M], format="csr"
    )
    eye = scipy.sparse.eye(nn, format="csr")
    diag_z = scipy.sparse.diags(z)
    a_ub = scipy.sparse.vstack(
        [
            scipy.sparse.hstack([-eye, diag_z], format="csr"),
            scipy.sparse.hstack([-eye, -diag_z], format="csr"),
        ],
        format="csr",
    )
    c = np.concatenate([np.ones(nn), np.zeros(nn)])
    return LpProblem(c=c, a_eq=a_eq, b_eq=cs.b, a_ub=a_ub, b_ub=np.zeros(2 * nn))


@dataclass(frozen=True)
class ReconstructionResult:
    """Outcome of a sparse reconstruction.

    ``a`` is None unless the LP reached an optimum.  ``objective`` is the
    weighted 1-norm attained; ``membership_residual`` certifies that the
    returned matrix reproduces the covariance.
    """

    a: np.ndarray | None
    status: str
    objective: float | None
    membership_residual: float | None
    hurwitz: bool | None
    iterations: int
    diagnostics: tuple[IterationRecord, ...]

    @property
    def optimal(self) -> bool:
        return self.a is not None

    def to_dict(self) -> dict:
        return {
            "n": None if self.a is None else self.a.shape[0],
            "a": None if self.a is None else self.a.tolist(),
            "status": self.status,
            "objective": self.objective,
            "membership_residual": self.membership_residual,
            "hurwitz": self.hurwitz,
            "iterations": self.iterations,
        }


def _result_from_solution(
    sol: LpSolution, cs: ConstraintSystem
) -> ReconstructionResult:
    if not sol.optimal:
        return ReconstructionResult(
            a=None,
            status=sol.status,
            objective=None,
            membership_residual=None,
            hurwitz=None,
            iterations=sol.iterations,
            diagnostics=sol.diagnostics,
        )
    nn = cs.n * cs.n
    a = unvec(sol.x[nn:], cs.n)
    return ReconstructionResult(
        a=a,
        status=sol.status,
        objective=sol.objective,
        membership_residual=membership_residual(cs, a),
        hurwitz=is_hurwitz(a),
        iterations=sol.iterations,
        diagnostics=sol.diagnostics,
    )


def reconstruct(
    gamma: np.ndarray,
    edges=None,
    *,
    ridge: float = 0.0,
    diag_weight: float = 0.0,
    tol: float = 1e-7,
    max_iter: int = 200,
    method: str = "interior-point",
) -> ReconstructionResult:
    """Recover the sparsest state matrix consistent with a covariance.

    ``ridge`` adds a multiple of the identity to the covariance before
    decomposition, a cheap guard when an empirical estimate is close to
    singular.  ``edges`` and ``diag_weight`` feed ``prior_weights``.
    The default ``tol`` is looser than the solver's own: covariances here
    are statistical estimates, and badly conditioned ones put the optimum
    on a degenerate face where the last solver digit is unreachable.
    """
    gamma = np.asarray(gamma, dtype=float)
    check_covariance(gamma)
    if ridge < 0:
        raise ValueError(f"ridge must be nonnegative, got {ridge}")
    if ridge > 0:
        gamma = gamma + ridge * np.eye(gamma.shape[0])
    dec = spectral_decompose(gamma)
    cs = build_constraints(dec)
    weights = prior_weights(cs.n, edges, diag_weight)
    problem = assemble_lp(cs, weights)
    sol = solve_lp(problem, tol=tol, max_iter=max_iter, method=method)
    return _result_from_solution(sol, cs)


def reconstruct_from_series(data, edges=None, **kwargs) -> ReconstructionResult:
    """Estimate the covariance from samples, then reconstruct."""
    return reconstruct(empirical_covariance(data), edges, **kwargs)
