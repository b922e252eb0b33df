"""The affine space of state matrices consistent with a given covariance.

For a covariance G = U diag(c) U^T, every solution A of the Lyapunov
equation G A^T + A G = -I has a rotated image Abar = U^T A U satisfying

    Abar[i, i] = -1/(2 c_i),        Abar[i, j] = -(c_i / c_j) Abar[j, i],

so the solution set S_G is an affine subspace of dimension n(n-1)/2.
Membership is equivalently characterized by a linear system M v = b on the
column-stacked matrix v = vec(A), with one row per unordered index pair
(i, j), i <= j.  That equality system is what the sparse-recovery LP
constrains against, and its layout is part of the on-disk contract:

* rows are ordered row-major over pairs (i, j) with i <= j
  (``index_upper``); columns are column-stacked (``index_full``);
* all indices in this module are zero-based; the row for pair (i, j) and
  the column for entry (l, k) are ``index_upper(i, j, n)`` and
  ``index_full(l, k, n)``.

The matrix M depends on the chosen eigenbasis U (which is not unique when
eigenvalues repeat), but the solution set {v : M v = b} depends only on G.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidPairError,
    RetryExhaustedError,
)
from .linalg import SpectralDecomposition, is_hurwitz, vec

# Constraint coefficients with magnitude at or below this are not stored.
_DROP_TOL = 1e-14


def upper_pair_count(n: int) -> int:
    """Number of unordered index pairs (i, j) with i <= j, i.e. rows of M."""
    return n * (n + 1) // 2


def free_parameter_count(n: int) -> int:
    """Dimension n(n-1)/2 of the solution space S_G."""
    return n * (n - 1) // 2


def index_upper(i: int, j: int, n: int) -> int:
    """Row index of the constraint for the unordered pair (i, j), i <= j.

    Row-major over upper-triangle pairs: (0,0), (0,1), ..., (0,n-1),
    (1,1), ..., (n-1,n-1).  Bijective onto [0, n(n+1)/2).
    """
    if not (0 <= i < n and 0 <= j < n):
        raise IndexOutOfRangeError(f"pair ({i}, {j}) out of range for n={n}")
    if i > j:
        raise InvalidPairError(f"upper-triangle pair requires i <= j, got ({i}, {j})")
    return i * n - i * (i + 1) // 2 + j


def index_full(l: int, k: int, n: int) -> int:
    """Column index of matrix entry (l, k) under column-stack vectorization.

    Matches vec: entry (l, k) lands at n*k + l.  Bijective onto [0, n^2).
    """
    if not (0 <= l < n and 0 <= k < n):
        raise IndexOutOfRangeError(f"entry ({l}, {k}) out of range for n={n}")
    return n * k + l


@dataclass(frozen=True)
class ConstraintSystem:
    """Sparse equality system M v = b characterizing membership in S_G.

    M has shape (n(n+1)/2, n^2) and full row rank for positive-definite G;
    b is zero on off-diagonal pair rows and -1/(2 c_i) on diagonal rows.
    """

    M: scipy.sparse.csr_matrix
    b: np.ndarray
    n: int

    def triplets(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Zero-based (row, col, value) arrays of the stored nonzeros."""
        coo = self.M.tocoo()
        return coo.row.copy(), coo.col.copy(), coo.data.copy()


def build_constraints(dec: SpectralDecomposition) -> ConstraintSystem:
    """Assemble (M, b) from a spectral decomposition of the covariance.

    Row (i, j) with i != j encodes c_j (U^T A U)_{i,j} + c_i (U^T A U)_{j,i} = 0;
    row (i, i) encodes (U^T A U)_{i,i} = -1/(2 c_i).  As coefficient matrices
    over entries (l, k) these are c_j u_i u_j^T + c_i u_j u_i^T and
    u_i u_i^T respectively, vectorized column-stacked into rows of M.
    """
    U = np.asarray(dec.U, dtype=float)
    c = np.asarray(dec.c, dtype=float)
    n = dec.n
    rows_out: list[np.ndarray] = []
    cols_out: list[np.ndarray] = []
    vals_out: list[np.ndarray] = []
    b = np.zeros(upper_pair_count(n))
    for i in range(n):
        ui = U[:, i]
        for j in range(i, n):
            r = index_upper(i, j, n)
            if i == j:
                W = np.outer(ui, ui)
                b[r] = -0.5 / c[i]
            else:
                uj = U[:, j]
                W = c[j] * np.outer(ui, uj) + c[i] * np.outer(uj, ui)
            row = vec(W)
            keep = np.abs(row) > _DROP_TOL
            (cols,) = np.nonzero(keep)
            rows_out.append(np.full(cols.shape[0], r, dtype=np.int64))
            cols_out.append(cols)
            vals_out.append(row[keep])
    M = scipy.sparse.coo_matrix(
        (np.concatenate(vals_out), (np.concatenate(rows_out), np.concatenate(cols_out))),
        shape=(upper_pair_count(n), n * n),
    ).tocsr()
    return ConstraintSystem(M=M, b=b, n=n)


def membership_residual(cs: ConstraintSystem, A: np.ndarray) -> float:
    """Max-abs residual |M vec(A) - b|; <= tol exactly when A is in S_G."""
    A = np.asarray(A, dtype=float)
    if A.shape != (cs.n, cs.n):
        raise DimensionMismatchError(
            f"expected a {cs.n} x {cs.n} matrix, got shape {A.shape}"
        )
    return float(np.abs(cs.M @ vec(A) - cs.b).max())


def complete_solution(dec: SpectralDecomposition, free: np.ndarray) -> np.ndarray:
    """Map free parameters (strictly-lower triangle of Abar) to a member of S_G.

    The strictly-lower entries are taken in row-major order over pairs
    (i, j) with i > j; the strictly-upper triangle and the diagonal follow
    from the rotated-solution identities, and the result is rotated back as
    A = U Abar U^T.
    """
    c = dec.c
    n = dec.n
    free = np.asarray(free, dtype=float)
    if free.shape != (free_parameter_count(n),):
        raise DimensionMismatchError(
            f"expected {free_parameter_count(n)} free parameters, got {free.shape}"
        )
    abar = np.zeros((n, n))
    il, jl = np.tril_indices(n, -1)
    abar[il, jl] = free
    abar[jl, il] = -(c[jl] / c[il]) * free
    np.fill_diagonal(abar, -0.5 / c)
    return dec.U @ abar @ dec.U.T


def symmetric_solution(dec: SpectralDecomposition) -> np.ndarray:
    """The unique symmetric member of S_G, equal to -(1/2) G^{-1}."""
    return complete_solution(dec, np.zeros(free_parameter_count(dec.n)))


def sample_solution(
    dec: SpectralDecomposition,
    scale: float = 1.0,
    seed: int | None = None,
    require_hurwitz: bool = False,
    max_retries: int = 1000,
) -> np.ndarray:
    """Draw a random member of S_G.

    Free parameters are i.i.d. normal with standard deviation ``scale``.
    Samples always satisfy the membership system but are not guaranteed to
    be Hurwitz; pass ``require_hurwitz=True`` to rejection-sample (the
    symmetric solution is negative definite, so small scales succeed fast).
    """
    if scale <= 0.0:
        raise ValueError(f"scale must be positive, got {scale}")
    rng = np.random.default_rng(seed)
    m = free_parameter_count(dec.n)
    for _ in range(max_retries):
        A = complete_solution(dec, rng.normal(0.0, scale, size=m))
        if not require_hurwitz or is_hurwitz(A):
            return A
    raise RetryExhaustedError(
        f"no Hurwitz sample found in {max_retries} draws at scale {scale}"
    )
