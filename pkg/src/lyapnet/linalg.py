"""Core linear algebra for covariance/state-matrix analysis.

The stationary covariance G of the linear system dx/dt = A x + w (unit
white-noise covariance) satisfies the continuous Lyapunov equation

    G A^T + A G = -I,

so the forward map A -> G is a single linear solve and, when A is symmetric,
the inverse map is the (scaled, negated) precision matrix.  This module owns
the forward solve, the spectral decomposition of G, the Hurwitz stability
test, the empirical covariance estimator, and the two symmetric reference
estimators (precision and correlation).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateVarianceError,
    InsufficientDataError,
    NotHurwitzError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

# Above this size the dense n^2 x n^2 Kronecker factorization is replaced by
# the Schur-based solver (identical contract, O(n^3) instead of O(n^6)).
_KRONECKER_MAX_N = 60


def vec(a: np.ndarray) -> np.ndarray:
    """Column-stack vectorization: entry A[i, j] lands at position n*j + i."""
    return np.asarray(a).ravel(order="F")


def unvec(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`vec` for an n x n matrix."""
    return np.asarray(v).reshape((n, n), order="F")


def _check_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains non-finite entries")
    return a


def check_covariance(gamma: np.ndarray, sym_rtol: float = 1e-10) -> np.ndarray:
    """Validate that ``gamma`` is square, finite and symmetric.

    Symmetry is relative: ``|G - G^T|_max <= sym_rtol * |G|_max``.  Positive
    definiteness is *not* checked here; operations that require it raise
    :class:`NotPositiveDefiniteError` themselves.
    """
    gamma = _check_square(gamma, "covariance")
    scale = np.abs(gamma).max()
    if np.abs(gamma - gamma.T).max() > sym_rtol * max(scale, 1e-300):
        raise ValueError("covariance is not symmetric within tolerance")
    return gamma


def lyapunov_residual(A: np.ndarray, gamma: np.ndarray) -> float:
    """Max-abs residual of G A^T + A G + I, zero iff (A, G) solve the equation."""
    A = np.asarray(A, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    n = A.shape[0]
    return float(np.abs(gamma @ A.T + A @ gamma + np.eye(n)).max())


def _lyapunov_solve_unchecked(A: np.ndarray) -> np.ndarray:
    """Solve G A^T + A G = -I without any stability pre-check.

    Raises SingularMatrixError when the Kronecker system is singular, i.e.
    when some eigenvalue pair of A satisfies lambda_i + lambda_j = 0.
    """
    n = A.shape[0]
    if n <= _KRONECKER_MAX_N:
        eye = np.eye(n)
        K = np.kron(eye, A) + np.kron(A, eye)
        try:
            g = np.linalg.solve(K, -vec(eye))
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError(
                "Kronecker system I (x) A + A (x) I is singular"
            ) from exc
        return unvec(g, n)
    # Bartels-Stewart path for large systems; same equation, Schur reduction.
    return scipy.linalg.solve_continuous_lyapunov(A, -np.eye(n))


def _cholesky_pd(p: np.ndarray) -> bool:
    """True iff the symmetric matrix ``p`` is positive definite."""
    try:
        np.linalg.cholesky(p)
        return True
    except np.linalg.LinAlgError:
        return False


def is_hurwitz(A: np.ndarray, margin: float = 0.0) -> bool:
    """Test whether every eigenvalue of A has real part < -margin.

    Uses the Lyapunov certificate: A is Hurwitz iff A P + P A^T = -I has a
    symmetric positive-definite solution.  The margin shifts the spectrum
    (A + margin*I) before testing.  Total on finite square matrices: any
    failure of the solve means an eigenvalue pair straddles the imaginary
    axis, so the answer is False rather than an error.
    """
    A = _check_square(A, "state matrix")
    if margin != 0.0:
        A = A + margin * np.eye(A.shape[0])
    try:
        P = _lyapunov_solve_unchecked(A)
    except SingularMatrixError:
        return False
    if not np.isfinite(P).all():
        return False
    return _cholesky_pd(0.5 * (P + P.T))


def spectral_abscissa(A: np.ndarray) -> float:
    """max Re(lambda) over the spectrum of A (diagnostic eigensolver path)."""
    A = _check_square(A, "matrix")
    return float(np.max(np.linalg.eigvals(A).real))


def forward_lyapunov_solve(A: np.ndarray) -> np.ndarray:
    """Stationary covariance of dx/dt = A x + w for a Hurwitz state matrix.

    Solves G A^T + A G = -I.  The solution is symmetrized exactly and is
    positive definite whenever A is Hurwitz; a non-Hurwitz A is rejected
    with :class:`NotHurwitzError`.
    """
    A = _check_square(A, "state matrix")
    try:
        G = _lyapunov_solve_unchecked(A)
    except SingularMatrixError as exc:
        raise NotHurwitzError(
            "state matrix has an eigenvalue pair with lambda_i + lambda_j = 0"
        ) from exc
    if not np.isfinite(G).all():
        raise SingularMatrixError("Lyapunov solve produced non-finite entries")
    G = 0.5 * (G + G.T)
    # PD of the solution certifies stability; covers the eigenvalue check.
    if not _cholesky_pd(G):
        raise NotHurwitzError("state matrix is not Hurwitz (certificate not PD)")
    return G


@dataclass(frozen=True)
class SpectralDecomposition:
    """Orthonormal factorization G = U diag(c) U^T with c sorted descending."""

    U: np.ndarray
    c: np.ndarray

    @property
    def n(self) -> int:
        return self.c.shape[0]

    def matrix(self) -> np.ndarray:
        """Reassemble U diag(c) U^T."""
        return (self.U * self.c) @ self.U.T


def spectral_decompose(gamma: np.ndarray, tol: float | None = None) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric positive-definite covariance.

    Eigenvalues are returned in descending order (LAPACK's ascending order
    reversed, which is deterministic for a fixed input).  Raises
    :class:`NotPositiveDefiniteError` if any eigenvalue is <= tol, where tol
    defaults to ``n * eps * max(|c|)``.
    """
    gamma = check_covariance(gamma)
    w, U = np.linalg.eigh(0.5 * (gamma + gamma.T))
    w = w[::-1].copy()
    U = U[:, ::-1].copy()
    if tol is None:
        tol = gamma.shape[0] * np.finfo(float).eps * max(float(np.abs(w).max()), 1e-300)
    if w[-1] <= tol:
        raise NotPositiveDefiniteError(
            f"smallest eigenvalue {w[-1]:.3e} <= tolerance {tol:.3e}"
        )
    return SpectralDecomposition(U=U, c=w)


def empirical_covariance(x) -> np.ndarray:
    """Sample covariance of a (T, n) series, one sample per row.

    Mean-centered per channel, divisor T - 1, symmetrized exactly as
    (S + S^T)/2.  Accepts a raw array or any object with a ``data``
    attribute holding one (e.g. a simulated TimeSeries).  The estimate may
    be semidefinite for short or degenerate series; positive definiteness
    is checked downstream where required.
    """
    data = np.asarray(getattr(x, "data", x), dtype=float)
    if data.ndim != 2:
        raise ValueError(f"expected a (T, n) array, got shape {data.shape}")
    T, n = data.shape
    if T < n + 1:
        raise InsufficientDataError(f"need at least n + 1 = {n + 1} samples, got {T}")
    centered = data - data.mean(axis=0, keepdims=True)
    S = (centered.T @ centered) / (T - 1)
    return 0.5 * (S + S.T)


def precision_baseline(gamma: np.ndarray) -> np.ndarray:
    """Symmetric reference estimator -(1/2) G^{-1}.

    This is the unique symmetric solution of the covariance Lyapunov
    equation, so for a symmetric Hurwitz state matrix it reproduces the
    matrix exactly.  The -1/2 scaling fixes the sign; alignment scoring is
    scale-invariant so only the sign matters downstream.
    """
    gamma = check_covariance(gamma)
    try:
        inv = np.linalg.inv(gamma)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("covariance is singular") from exc
    if not np.isfinite(inv).all():
        raise SingularMatrixError("covariance inverse is non-finite")
    out = -0.5 * inv
    return 0.5 * (out + out.T)


def correlation_baseline(gamma: np.ndarray) -> np.ndarray:
    """Symmetric reference estimator D^{-1/2} G D^{-1/2} with D = diag(G).

    Positive sign convention: for weakly coupled stable systems a positive
    edge produces positive covariance, so the correlation itself (not its
    negation) is the comparable estimate.
    """
    gamma = check_covariance(gamma)
    d = np.diag(gamma).copy()
    if np.any(d <= 0.0):
        raise DegenerateVarianceError("covariance has a non-positive diagonal entry")
    s = 1.0 / np.sqrt(d)
    out = gamma * np.outer(s, s)
    return 0.5 * (out + out.T)
