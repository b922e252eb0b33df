import numpy as np
import pytest

import lyapnet as ln
from lyapnet.errors import (
    IndexOutOfRangeError,
    NotPositiveDefiniteError,
    SelfLoopInPriorsError,
)
from lyapnet.solution_space import upper_pair_count

from .oracles import basis_pursuit_oracle

A_2X2 = np.array([[-1.0, 0.5], [0.0, -1.0]])
GAMMA_2X2 = np.array([[9.0 / 16.0, 1.0 / 8.0], [1.0 / 8.0, 0.5]])


def test_prior_weights_layout():
    w = ln.prior_weights(3)
    assert np.array_equal(w, np.ones((3, 3)) - np.eye(3))
    # Edge source 1 -> target 0 exempts entry (0, 1).
    w = ln.prior_weights(3, edges=[(1, 0)])
    assert w[0, 1] == 0.0
    assert w[1, 0] == 1.0
    w = ln.prior_weights(3, diag_weight=1.0)
    assert np.array_equal(w, np.ones((3, 3)))


def test_prior_weights_validation():
    with pytest.raises(SelfLoopInPriorsError):
        ln.prior_weights(3, edges=[(1, 1)])
    with pytest.raises(IndexOutOfRangeError):
        ln.prior_weights(3, edges=[(0, 3)])


def test_assemble_lp_shapes():
    cs = ln.build_constraints(ln.spectral_decompose(GAMMA_2X2))
    problem = ln.assemble_lp(cs, ln.prior_weights(2))
    nn = 4
    assert problem.c.shape == (2 * nn,)
    assert problem.a_eq.shape == (upper_pair_count(2), 2 * nn)
    assert problem.a_ub.shape == (2 * nn, 2 * nn)


def test_reconstruct_matches_l1_oracle():
    # With no prior and free diagonal, the reconstruction minimizes the
    # off-diagonal 1-norm over the membership space; enumerate that space
    # directly (weight-zero coordinates eliminated first) as the oracle.
    cs = ln.build_constraints(ln.spectral_decompose(GAMMA_2X2))
    m = cs.M.toarray()
    # Coordinates vec-indexed 0 and 3 are the (free) diagonal; solve them
    # out of the equality system to leave the penalized pair.
    free_idx = [0, 3]
    pen_idx = [1, 2]
    # b - M_free z_free = M_pen v for the best z_free given v: since
    # M_free has full column rank 2 and there are 3 rows, eliminate via
    # least squares projector.
    mf = m[:, free_idx]
    proj = np.eye(3) - mf @ np.linalg.pinv(mf)
    a_red = proj @ m[:, pen_idx]
    b_red = proj @ cs.b
    obj_oracle, _ = basis_pursuit_oracle(a_red, b_red, rtol=1e-8)
    result = ln.reconstruct(GAMMA_2X2)
    assert result.optimal
    assert result.objective == pytest.approx(obj_oracle, abs=1e-6)
    assert result.membership_residual <= 1e-6


def test_reconstruct_with_true_support_recovers_exactly():
    # Exempting the true edge reduces the penalty to zero, and the only
    # zero-penalty member is the generating matrix itself.
    result = ln.reconstruct(GAMMA_2X2, edges=[(1, 0)])
    assert result.optimal
    assert np.abs(result.a - A_2X2).max() <= 1e-6
    assert result.objective == pytest.approx(0.0, abs=1e-7)
    assert result.hurwitz


def test_reconstruct_full_info_random_sparse():
    gen = ln.GeneratorConfig(n=7, n_edges=10, epsilon=0.5)
    a_true = ln.random_hurwitz(gen, seed=21)
    gamma = ln.forward_lyapunov_solve(a_true)
    result = ln.reconstruct(gamma, edges=ln.true_edges(a_true))
    assert result.optimal
    assert np.abs(result.a - a_true).max() <= 1e-5
    assert ln.alignment(a_true, result.a) >= 0.999


def test_reconstruct_diag_weight_penalizes_diagonal():
    free = ln.reconstruct(GAMMA_2X2, diag_weight=0.0)
    tied = ln.reconstruct(GAMMA_2X2, diag_weight=1.0)
    assert free.optimal and tied.optimal
    # Objective now includes |diagonal|, so it must grow.
    assert tied.objective > free.objective + 0.1
    assert tied.membership_residual <= 1e-6


def test_reconstruct_ridge_handles_near_singular():
    # A covariance with a tiny eigenvalue is rejected as-is but passes
    # with diagonal loading.
    u = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    gamma = (u * [1.0, 1e-18]) @ u.T
    with pytest.raises(NotPositiveDefiniteError):
        ln.reconstruct(gamma)
    result = ln.reconstruct(gamma, ridge=1e-6)
    assert result.optimal


def test_reconstruct_rejects_negative_ridge():
    with pytest.raises(ValueError):
        ln.reconstruct(GAMMA_2X2, ridge=-1.0)


def test_reconstruct_from_series():
    a_true = np.array([[-1.0, 0.0, 0.0], [0.8, -1.0, 0.0], [0.0, 0.8, -1.0]])
    ts = ln.simulate_linear(a_true, ln.SimConfig(dt=0.02, steps=60_000), seed=3)
    result = ln.reconstruct_from_series(ts.data, edges=ln.true_edges(a_true))
    assert result.optimal
    assert result.membership_residual <= 1e-6
    assert ln.alignment(a_true, result.a) >= 0.95


def test_reconstruct_accepts_edge_set_object():
    edges = ln.EdgeSet(n=2, edges=((1, 0),), scores=(1.0,))
    result = ln.reconstruct(GAMMA_2X2, edges=edges)
    assert result.optimal
    assert np.abs(result.a - A_2X2).max() <= 1e-6


def test_result_to_dict_roundtrips_matrix():
    result = ln.reconstruct(GAMMA_2X2)
    d = result.to_dict()
    assert d["status"] == "optimal"
    assert np.allclose(np.asarray(d["a"]), result.a)
    assert d["n"] == 2
