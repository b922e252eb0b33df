import numpy as np
import pytest
import scipy.optimize
import scipy.sparse

import lyapnet as ln
from lyapnet.errors import DimensionMismatchError
from lyapnet.lp import to_standard_form

from .oracles import basis_pursuit_oracle


def basis_pursuit_problem(a_eq, b_eq):
    """min ||v||_1 s.t. A v = b as an envelope LP over (t, v)."""
    m, n = a_eq.shape
    eye = np.eye(n)
    a_ub = np.block([[-eye, eye], [-eye, -eye]])
    return ln.LpProblem(
        c=np.concatenate([np.ones(n), np.zeros(n)]),
        a_eq=np.hstack([np.zeros((m, n)), a_eq]),
        b_eq=b_eq,
        a_ub=a_ub,
        b_ub=np.zeros(2 * n),
    )


def random_instance(rng, n_max=12):
    n = int(rng.integers(4, n_max + 1))
    m = int(rng.integers(2, max(3, n - 1)))
    a = rng.normal(size=(m, n))
    x_true = np.zeros(n)
    support = rng.choice(n, size=max(1, m // 2), replace=False)
    x_true[support] = rng.normal(size=support.size)
    return a, a @ x_true


def test_interior_point_simple_inequality():
    # min x + y subject to x + y >= 1 has value 1.
    problem = ln.LpProblem(
        c=[1.0, 1.0], a_ub=[[-1.0, -1.0]], b_ub=[-1.0]
    )
    sol = ln.solve_lp(problem)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(1.0, abs=1e-7)


def test_interior_point_matches_oracle_small():
    rng = np.random.default_rng(7)
    a, b = random_instance(rng)
    obj_oracle, _ = basis_pursuit_oracle(a, b)
    sol = ln.solve_lp(basis_pursuit_problem(a, b))
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(obj_oracle, abs=1e-6)


def test_simplex_matches_interior_point():
    rng = np.random.default_rng(8)
    for _ in range(10):
        a, b = random_instance(rng, n_max=8)
        problem = basis_pursuit_problem(a, b)
        ip = ln.solve_lp(problem)
        sx = ln.solve_lp(problem, method="simplex")
        assert ip.status == "optimal" and sx.status == "optimal"
        assert ip.objective == pytest.approx(sx.objective, abs=1e-6)


def test_matches_reference_solver():
    # Cross-check against an unrelated production implementation.
    rng = np.random.default_rng(9)
    for _ in range(10):
        a, b = random_instance(rng)
        problem = basis_pursuit_problem(a, b)
        a_std, b_std, c_std = to_standard_form(problem)
        ref = scipy.optimize.linprog(c_std, A_eq=a_std, b_eq=b_std, method="highs")
        sol = ln.solve_lp(problem)
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(ref.fun, abs=1e-6)


def test_sparse_and_dense_paths_agree():
    rng = np.random.default_rng(10)
    a, b = random_instance(rng)
    dense = basis_pursuit_problem(a, b)
    sparse = ln.LpProblem(
        c=dense.c,
        a_eq=scipy.sparse.csr_matrix(dense.a_eq),
        b_eq=dense.b_eq,
        a_ub=scipy.sparse.csr_matrix(dense.a_ub),
        b_ub=dense.b_ub,
    )
    s1 = ln.solve_lp(dense)
    s2 = ln.solve_lp(sparse)
    assert s1.status == s2.status == "optimal"
    assert s1.objective == pytest.approx(s2.objective, abs=1e-8)
    assert np.allclose(s1.x, s2.x, atol=1e-6)


def test_infeasible_detected():
    # x <= -1 and x >= 1 cannot both hold.
    problem = ln.LpProblem(c=[1.0], a_ub=[[1.0], [-1.0]], b_ub=[-1.0, -1.0])
    assert ln.solve_lp(problem).status == "infeasible"
    assert ln.solve_lp(problem, method="simplex").status == "infeasible"


def test_unbounded_detected():
    # min x with x <= 0 and x free below.
    problem = ln.LpProblem(c=[1.0], a_ub=[[1.0]], b_ub=[0.0])
    assert ln.solve_lp(problem).status == "unbounded"
    assert ln.solve_lp(problem, method="simplex").status == "unbounded"


def test_iteration_limit_status():
    rng = np.random.default_rng(11)
    a, b = random_instance(rng)
    sol = ln.solve_lp(basis_pursuit_problem(a, b), max_iter=1)
    assert sol.status == "iteration_limit"
    assert sol.iterations == 1


def test_diagnostics_track_progress():
    rng = np.random.default_rng(12)
    a, b = random_instance(rng)
    obj_oracle, _ = basis_pursuit_oracle(a, b)
    sol = ln.solve_lp(basis_pursuit_problem(a, b))
    assert len(sol.diagnostics) == sol.iterations
    # Reported lower bounds never overshoot the true optimum, and the
    # primal objective converges to it from the record alone.
    for rec in sol.diagnostics:
        assert rec.dual_bound <= obj_oracle + 1e-6
    assert sol.diagnostics[-1].primal_objective == pytest.approx(obj_oracle, abs=1e-6)
    assert sol.diagnostics[-1].rho_p <= 1e-8
    assert sol.diagnostics[-1].rho_d <= 1e-8


def test_standard_form_shapes():
    problem = ln.LpProblem(
        c=[1.0, 2.0], a_eq=[[1.0, 1.0]], b_eq=[1.0], a_ub=[[1.0, 0.0]], b_ub=[2.0]
    )
    a, b, c = to_standard_form(problem)
    assert a.shape == (2, 5)  # xp, xm, one slack
    assert np.array_equal(b, [1.0, 2.0])
    assert np.array_equal(c, [1.0, 2.0, -1.0, -2.0, 0.0])


def test_problem_validation():
    with pytest.raises(DimensionMismatchError):
        ln.LpProblem(c=[1.0], a_eq=[[1.0, 2.0]], b_eq=[1.0])
    with pytest.raises(DimensionMismatchError):
        ln.LpProblem(c=[1.0], a_eq=[[1.0]])
    with pytest.raises(DimensionMismatchError):
        ln.solve_lp(ln.LpProblem(c=[1.0]))


def test_simplex_size_guard():
    rng = np.random.default_rng(13)
    a = rng.normal(size=(3, 40))
    problem = basis_pursuit_problem(a, a @ rng.normal(size=40))
    with pytest.raises(ValueError):
        ln.solve_lp(problem, method="simplex")


def test_unknown_method():
    with pytest.raises(ValueError):
        ln.solve_lp(ln.LpProblem(c=[1.0], a_ub=[[1.0]], b_ub=[1.0]), method="magic")
