"""Linear programming with free variables, equalities, and inequalities.

Problems are stated as

    minimize    c^T x
    subject to  A_eq x  = b_eq
                A_ub x <= b_ub

with x unrestricted in sign.  Internally the problem is brought to
standard form (split x = xp - xm with xp, xm >= 0, slack the
inequalities) and handed to a primal-dual interior-point method on the
homogeneous self-dual embedding of Andersen and Andersen (2000), with
Mehrotra predictor-corrector steps.  The embedding makes infeasibility
and unboundedness detectable from the same iteration that finds optima:
the auxiliary scalars tau and kappa satisfy tau * kappa -> 0, and which
of the two vanishes tells the outcome apart.

Each iteration solves the normal equations A D A^T dy = r with
D = diag(x / z), factored fresh per iteration (sparse LU when the
constraint matrix is sparse, Cholesky with diagonal-regularization
fallback when dense).  A dense two-phase revised simplex with Bland's
rule is included as an independent cross-check for small problems.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import DimensionMismatchError, SingularBlockError

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"
STATUS_ITERATION_LIMIT = "iteration_limit"

# Fraction of the step to the nonnegativity boundary actually taken.
_ALPHA0 = 0.99995
# Centering cap in Mehrotra's corrector heuristic.
_BETA = 0.1
# Iterations without a new best iterate before giving up: once mu reaches
# the rounding floor further steps only inject noise.
_STALL_ITERATIONS = 30
# Largest standard-form column count the dense simplex accepts.
_SIMPLEX_MAX_COLS = 200


@dataclass(frozen=True)
class LpProblem:
    """LP data with free variables.

    Constraint blocks may be dense arrays or scipy sparse matrices; either
    block (but not both) may be absent.
    """

    c: np.ndarray
    a_eq: object = None
    b_eq: np.ndarray | None = None
    a_ub: object = None
    b_ub: np.ndarray | None = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        object.__setattr__(self, "c", c)
        for name in ("a_eq", "a_ub"):
            a = getattr(self, name)
            if a is not None and not scipy.sparse.issparse(a):
                object.__setattr__(self, name, np.atleast_2d(np.asarray(a, dtype=float)))
        for name in ("b_eq", "b_ub"):
            b = getattr(self, name)
            if b is not None:
                object.__setattr__(self, name, np.atleast_1d(np.asarray(b, dtype=float)))
        _validate_block(self.a_eq, self.b_eq, self.c.shape[0], "eq")
        _validate_block(self.a_ub, self.b_ub, self.c.shape[0], "ub")

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]


def _validate_block(a, b, n_vars: int, label: str) -> None:
    if (a is None) != (b is None):
        raise DimensionMismatchError(f"a_{label} and b_{label} must be given together")
    if a is None:
        return
    if a.shape[1] != n_vars or a.shape[0] != b.shape[0]:
        raise DimensionMismatchError(
            f"{label} block shapes {a.shape} / {b.shape} do not match {n_vars} variables"
        )


@dataclass(frozen=True)
class IterationRecord:
    """Progress snapshot taken after each interior-point step."""

    iteration: int
    primal_objective: float
    dual_bound: float
    duality_measure: float
    rho_p: float
    rho_d: float
    rho_gap: float
    step: float


@dataclass(frozen=True)
class LpSolution:
    """Solver outcome in the original (free) variables."""

    x: np.ndarray | None
    status: str
    objective: float | None
    iterations: int
    diagnostics: tuple[IterationRecord, ...] = field(default=())

    @property
    def optimal(self) -> bool:
        return self.status == STATUS_OPTIMAL


def to_standard_form(problem: LpProblem):
    """Rewrite as min ct^T xt, At xt = bt, xt >= 0.

    Columns of At are ordered (xp, xm, s): the positive and negative parts
    of the original variables followed by one slack per inequality row.
    Returns (At, bt, ct); At is sparse iff either input block is sparse.
    """
    n = problem.n_vars
    m_ub = 0 if problem.a_ub is None else problem.a_ub.shape[0]
    sparse = scipy.sparse.issparse(problem.a_eq) or scipy.sparse.issparse(problem.a_ub)
    blocks = []
    rhs = []
    if problem.a_eq is not None:
        a = problem.a_eq
        zero = (
            scipy.sparse.csr_matrix((a.shape[0], m_ub))
            if sparse
            else np.zeros((a.shape[0], m_ub))
        )
        blocks.append([a, -a, zero])
        rhs.append(problem.b_eq)
    if problem.a_ub is not None:
        a = problem.a_ub
        eye = scipy.sparse.eye(m_ub, format="csr") if sparse else np.eye(m_ub)
        blocks.append([a, -a, eye])
        rhs.append(problem.b_ub)
    if not blocks:
        raise DimensionMismatchError("problem has no constraints")
    if sparse:
        a_std = scipy.sparse.bmat(blocks, format="csr")
    else:
        a_std = np.block(blocks)
    b_std = np.concatenate(rhs)
    c_std = np.concatenate([problem.c, -problem.c, np.zeros(m_ub)])
    return a_std, b_std, c_std


def _from_standard_form(x_std: np.ndarray, n_vars: int) -> np.ndarray:
    return x_std[:n_vars] - x_std[n_vars : 2 * n_vars]


def _equilibrate(a, b, c):
    """One pass of row then column max-abs scaling of the standard form.

    Covariance-membership columns inherit eigenvalue ratios of the input
    matrix and can differ by many orders of magnitude; scaling them to
    unit max-abs keeps the normal equations solvable.  The change of
    variables is undone on the returned solution, and objective and dual
    values are invariant, so callers never observe the scaling.
    """
    sparse = scipy.sparse.issparse(a)
    aa = abs(a)
    row = (aa.max(axis=1).toarray().ravel() if sparse else aa.max(axis=1))
    row[row == 0.0] = 1.0
    if sparse:
        scaled = scipy.sparse.diags(1.0 / row) @ a
        col = abs(scaled).max(axis=0).toarray().ravel()
    else:
        scaled = a / row[:, None]
        col = np.abs(scaled).max(axis=0)
    col[col == 0.0] = 1.0
    if sparse:
        scaled = (scaled @ scipy.sparse.diags(1.0 / col)).tocsr()
    else:
        scaled = scaled / col[None, :]
    return scaled, b / row, c / col, col


def _refined(solve_once, m):
    # One round of iterative refinement against the unshifted matrix;
    # near convergence this recovers digits the factorization loses.
    def solve(r):
        d = solve_once(r)
        return d + solve_once(r - m @ d)

    return solve


def _normal_solver(a, dinv: np.ndarray):
    """Factor M = A diag(dinv) A^T and return a solve callable.

    Near convergence M becomes severely ill conditioned; on factorization
    failure an escalating diagonal shift is added before giving up, and
    every solve is polished by one refinement step against the unshifted
    matrix.
    """
    if scipy.sparse.issparse(a):
        m = (a @ scipy.sparse.diags(dinv) @ a.T).tocsc()
        shift = 0.0
        for _ in range(4):
            try:
                lu = scipy.sparse.linalg.splu(
                    m if shift == 0.0 else m + shift * scipy.sparse.eye(m.shape[0], format="csc")
                )
                return _refined(lu.solve, m)
            except RuntimeError:
                shift = 1e-10 * max(1.0, abs(m.diagonal()).max()) if shift == 0.0 else shift * 1e4
        raise SingularBlockError("normal equations are numerically singular")
    m = (a * dinv) @ a.T
    shift = 0.0
    for _ in range(4):
        try:
            factor = scipy.linalg.cho_factor(
                m if shift == 0.0 else m + shift * np.eye(m.shape[0]), check_finite=False
            )
            return _refined(
                lambda r: scipy.linalg.cho_solve(factor, r, check_finite=False), m
            )
        except scipy.linalg.LinAlgError:
            shift = 1e-10 * max(1.0, np.abs(np.diag(m)).max()) if shift == 0.0 else shift * 1e4
    raise SingularBlockError("normal equations are numerically singular")


def _sym_solve(dinv, a, r1, r2, solve):
    # Two-solve reduction of the augmented KKT system to normal equations:
    # find (u, v) with A^T v - u / dinv = r1 and A u = r2.
    def once(r1, r2):
        v = solve(r2 + a @ (dinv * r1))
        u = dinv * (a.T @ v - r1)
        return u, v

    u, v = once(r1, r2)
    # Refine against the augmented system: back-substitution multiplies
    # solve error by dinv, which grows without bound near convergence.
    du, dv = once(r1 - (a.T @ v - u / dinv), r2 - a @ u)
    return u + du, v + dv


def _search_direction(a, b, c, x, y, z, tau, kappa, gamma, eta, solve, p, q, correction=None):
    rhatp = eta * (b * tau - a @ x)
    rhatd = eta * (c * tau - a.T @ y - z)
    rhatg = eta * (kappa + c @ x - b @ y)
    mu = (x @ z + tau * kappa) / (x.shape[0] + 1)
    rhatxs = gamma * mu - x * z
    rhattk = gamma * mu - tau * kappa
    if correction is not None:
        d_x_a, d_z_a, d_tau_a, d_kappa_a = correction
        rhatxs = rhatxs - d_x_a * d_z_a
        rhattk = rhattk - d_tau_a * d_kappa_a
    dinv = x / z
    u, v = _sym_solve(dinv, a, rhatd - (1.0 / x) * rhatxs, rhatp, solve)
    d_tau = (rhatg + rhattk / tau - (-c @ u + b @ v)) / (kappa / tau + (-c @ p + b @ q))
    d_x = u + p * d_tau
    d_y = v + q * d_tau
    d_z = (1.0 / x) * (rhatxs - z * d_x)
    d_kappa = (rhattk - kappa * d_tau) / tau
    return d_x, d_y, d_z, d_tau, d_kappa


def _step_to_boundary(x, d_x, z, d_z, tau, d_tau, kappa, d_kappa, alpha0):
    alpha = 1.0
    for val, dval in ((tau, d_tau), (kappa, d_kappa)):
        if dval < 0:
            alpha = min(alpha, alpha0 * val / -dval)
    neg = d_x < 0
    if np.any(neg):
        alpha = min(alpha, alpha0 * np.min(x[neg] / -d_x[neg]))
    neg = d_z < 0
    if np.any(neg):
        alpha = min(alpha, alpha0 * np.min(z[neg] / -d_z[neg]))
    return alpha


def _dual_bound(a, b, c, x, y, tau):
    """Heuristic lower estimate of the optimal value from an interior iterate.

    Interior iterates are never exactly dual feasible, so the raw dual
    objective b^T y / tau overstates what has been certified.  The largest
    violation of c - A^T y / tau >= 0 is charged against twice the current
    primal 1-norm as a proxy for the norm of the unknown optimizer.  The
    correction vanishes at convergence; between iterations the value is a
    progress diagnostic, not a certificate.
    """
    slack = c - a.T @ (y / tau)
    violation = max(0.0, float(-slack.min()))
    return float(b @ y / tau - 2.0 * violation * np.abs(x / tau).sum())


def _solve_interior_point(a, b, c, tol: float, max_iter: int):
    m, n = a.shape
    x = np.ones(n)
    y = np.zeros(m)
    z = np.ones(n)
    tau = 1.0
    kappa = 1.0

    def residual_norms(x, y, z, tau, kappa):
        r_p = np.linalg.norm(b * tau - a @ x)
        r_d = np.linalg.norm(c * tau - a.T @ y - z)
        r_g = abs(kappa + c @ x - b @ y)
        return r_p, r_d, r_g

    r_p0, r_d0, r_g0 = residual_norms(x, y, z, tau, kappa)
    mu0 = (x @ z + tau * kappa) / (n + 1)
    records = []
    status = STATUS_ITERATION_LIMIT
    iteration = 0
    best_x = x / tau
    best_score = np.inf
    best_iteration = 0
    while iteration < max_iter:
        iteration += 1
        solve = _normal_solver(a, x / z)
        p, q = _sym_solve(x / z, a, c, b, solve)
        # Predictor: pure Newton step toward the boundary (gamma = 0).
        aff = _search_direction(a, b, c, x, y, z, tau, kappa, 0.0, 1.0, solve, p, q)
        d_x_a, d_y_a, d_z_a, d_tau_a, d_kappa_a = aff
        alpha_a = _step_to_boundary(x, d_x_a, z, d_z_a, tau, d_tau_a, kappa, d_kappa_a, 1.0)
        gamma = (1.0 - alpha_a) ** 2 * min(_BETA, 1.0 - alpha_a)
        # Corrector: recenter and compensate the predictor's second-order term.
        d_x, d_y, d_z, d_tau, d_kappa = _search_direction(
            a, b, c, x, y, z, tau, kappa, gamma, 1.0 - gamma, solve, p, q,
            correction=(d_x_a, d_z_a, d_tau_a, d_kappa_a),
        )
        alpha = _step_to_boundary(x, d_x, z, d_z, tau, d_tau, kappa, d_kappa, _ALPHA0)
        x = x + alpha * d_x
        y = y + alpha * d_y
        z = z + alpha * d_z
        tau = tau + alpha * d_tau
        kappa = kappa + alpha * d_kappa

        r_p, r_d, r_g = residual_norms(x, y, z, tau, kappa)
        mu = (x @ z + tau * kappa) / (n + 1)
        rho_p = r_p / max(1.0, r_p0)
        rho_d = r_d / max(1.0, r_d0)
        rho_g = r_g / max(1.0, r_g0)
        rho_mu = mu / mu0
        obj = float(c @ x / tau)
        rho_gap = abs(c @ x - b @ y) / (tau + abs(b @ y))
        records.append(
            IterationRecord(
                iteration=iteration,
                primal_objective=obj,
                dual_bound=_dual_bound(a, b, c, x, y, tau),
                duality_measure=float(mu),
                rho_p=float(rho_p),
                rho_d=float(rho_d),
                rho_gap=float(rho_gap),
                step=float(alpha),
            )
        )
        if not np.isfinite([tau, kappa, mu]).all() or tau <= 0:
            raise SingularBlockError("interior-point iteration diverged")
        score = max(rho_p, rho_d, rho_gap)
        if score < best_score:
            best_score = score
            best_x = x / tau
            best_iteration = iteration
        if rho_p <= tol and rho_d <= tol and rho_gap <= tol:
            status = STATUS_OPTIMAL
            break
        degenerate = rho_p <= tol and rho_d <= tol and rho_g <= tol and tau <= tol * max(
            1.0, kappa
        )
        collapsed = rho_mu <= tol and tau <= tol * min(1.0, kappa)
        if degenerate or collapsed:
            status = STATUS_INFEASIBLE if b @ y > tol else STATUS_UNBOUNDED
            break
        if iteration - best_iteration >= _STALL_ITERATIONS:
            break
    if status == STATUS_OPTIMAL:
        x_hat = x / tau
    elif status == STATUS_ITERATION_LIMIT:
        # Rounding noise can push late iterates off the converged point;
        # hand back the best one seen instead of the last.
        x_hat = best_x
    else:
        x_hat = None
    return x_hat, status, iteration, tuple(records)


def _two_phase_simplex(a, b, c, max_iter: int):
    """Dense revised simplex on standard form, Bland's rule throughout.

    Intended as an independent small-problem cross-check for the
    interior-point path, so clarity is preferred over speed: the basis
    system is re-solved from scratch each pivot.
    """
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    m, n = a.shape
    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0

    def run_phase(a_ph, c_ph, basis, n_enterable):
        for _ in range(max_iter):
            basis_inv_b = np.linalg.solve(a_ph[:, basis], b)
            lam = np.linalg.solve(a_ph[:, basis].T, c_ph[basis])
            reduced = c_ph - a_ph.T @ lam
            candidates = np.nonzero(reduced[:n_enterable] < -1e-9)[0]
            candidates = [j for j in candidates if j not in set(basis)]
            if not candidates:
                return basis, basis_inv_b, "optimal"
            enter = min(candidates)
            direction = np.linalg.solve(a_ph[:, basis], a_ph[:, enter])
            pos = direction > 1e-12
            if not np.any(pos):
                return basis, basis_inv_b, "unbounded"
            ratios = np.full(m, np.inf)
            ratios[pos] = basis_inv_b[pos] / direction[pos]
            best = ratios.min()
            ties = [i for i in range(m) if ratios[i] <= best + 1e-12]
            leave = min(ties, key=lambda i: basis[i])
            basis = list(basis)
            basis[leave] = enter
        return basis, np.linalg.solve(a_ph[:, basis], b), "iteration_limit"

    # Phase 1: artificial variables, one per row.
    a1 = np.hstack([a, np.eye(m)])
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    basis = list(range(n, n + m))
    basis, xb, phase1 = run_phase(a1, c1, basis, n + m)
    if phase1 == "iteration_limit":
        return None, STATUS_ITERATION_LIMIT
    if c1[basis] @ xb > 1e-8:
        return None, STATUS_INFEASIBLE
    # Drive artificials out of the basis where possible; redundant rows
    # keep a degenerate artificial at value zero, which is harmless
    # because phase 2 never lets an artificial re-enter.
    for i, bi in enumerate(basis):
        if bi < n:
            continue
        row = np.linalg.solve(a1[:, basis], a)[i]
        replacements = np.nonzero(np.abs(row) > 1e-9)[0]
        replacements = [j for j in replacements if j not in set(basis)]
        if replacements:
            basis[i] = min(replacements)
    basis, xb, phase2 = run_phase(a1, np.concatenate([c, np.zeros(m)]), basis, n)
    if phase2 == "iteration_limit":
        return None, STATUS_ITERATION_LIMIT
    if phase2 == "unbounded":
        return None, STATUS_UNBOUNDED
    x = np.zeros(n + m)
    x[basis] = xb
    return x[:n], STATUS_OPTIMAL


def solve_lp(
    problem: LpProblem,
    tol: float = 1e-8,
    max_iter: int = 200,
    method: str = "interior-point",
) -> LpSolution:
    """Solve an LP with free variables.

    The default interior-point path scales to the sparse systems produced
    by covariance-membership constraints; ``method="simplex"`` runs the
    dense cross-check instead and is limited to small problems.

    Status ``iteration_limit`` means neither convergence to ``tol`` nor an
    infeasibility/unboundedness certificate was reached, either within
    ``max_iter`` iterations or before progress stalled at the rounding
    floor; ``x`` then holds the best iterate seen, unscaled checks on it
    are the caller's responsibility.
    """
    a, b, c = to_standard_form(problem)
    if method == "simplex":
        if a.shape[1] > _SIMPLEX_MAX_COLS:
            raise ValueError(
                f"simplex cross-check is limited to {_SIMPLEX_MAX_COLS} standard-form "
                f"columns, got {a.shape[1]}"
            )
        a = a.toarray() if scipy.sparse.issparse(a) else a
        x_std, status = _two_phase_simplex(a, b, c, max_iter=10_000)
        iterations = 0
        records: tuple[IterationRecord, ...] = ()
    elif method == "interior-point":
        a2, b2, c2, col = _equilibrate(a, b, c)
        x_std, status, iterations, records = _solve_interior_point(a2, b2, c2, tol, max_iter)
        if x_std is not None:
            x_std = x_std / col
    else:
        raise ValueError(f"unknown method {method!r}")
    if x_std is None:
        return LpSolution(x=None, status=status, objective=None, iterations=iterations,
                          diagnostics=records)
    x = _from_standard_form(x_std, problem.n_vars)
    return LpSolution(
        x=x,
        status=status,
        objective=float(problem.c @ x),
        iterations=iterations,
        diagnostics=records,
    )
