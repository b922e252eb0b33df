"""Independent reference implementations used only by the tests.

Nothing here shares code paths with the package: the basis-pursuit
oracle enumerates candidate supports by brute force, and the AR(1)
fixture is written down from the closed-form stationary moments.
"""

from itertools import combinations

import numpy as np


def basis_pursuit_oracle(a_eq, b_eq, rtol=1e-9):
    """Minimize ||x||_1 subject to A x = b by support enumeration.

    Some minimizer of the 1-norm over a nonempty affine set is supported
    on at most m = rank(A) coordinates, so scanning all supports of size
    <= m and solving each reduced system exactly is a complete (if
    exponential) method.  Returns (objective, x); raises ValueError when
    no support yields a consistent system.
    """
    a_eq = np.asarray(a_eq, dtype=float)
    b_eq = np.asarray(b_eq, dtype=float)
    m, n = a_eq.shape
    scale = max(1.0, np.abs(b_eq).max())
    best_obj, best_x = np.inf, None
    max_support = min(m, n)
    for size in range(max_support + 1):
        for support in combinations(range(n), size):
            cols = a_eq[:, support] if support else np.zeros((m, 0))
            sol, *_ = np.linalg.lstsq(cols, b_eq, rcond=None)
            residual = np.abs(cols @ sol - b_eq).max() if size else np.abs(b_eq).max()
            if residual > rtol * scale:
                continue
            obj = np.abs(sol).sum()
            if obj < best_obj - 1e-15:
                best_obj = obj
                best_x = np.zeros(n)
                best_x[list(support)] = sol
    if best_x is None:
        raise ValueError("no consistent support found; system infeasible?")
    return float(best_obj), best_x


def ar1_lagged_covariance():
    """Exact lagged covariance of the two-channel AR(1) fixture.

    X is unit white noise driving Y_t = 0.5 Y_{t-1} + 0.5 X_{t-1} + eta_t
    with unit eta.  Stationary moments: Var X = 1, Var Y = 5/3,
    Cov(Y_t, Y_{t-1}) = 5/6, Cov(Y_t, X_{t-1}) = 1/2, everything else
    zero.  Ordering matches ``lagged_covariance``: (x_t, y_t, x_lag, y_lag).
    """
    vy = 5.0 / 3.0
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, vy, 0.5, 5.0 / 6.0],
            [0.0, 0.5, 1.0, 0.0],
            [0.0, 5.0 / 6.0, 0.0, vy],
        ]
    )


# Closed-form transfer entropy of the fixture, X -> Y at lag one.
AR1_TE = 0.5 * np.log(5.0 / 4.0)


def simulate_ar1(steps, seed):
    """Sample the AR(1) fixture; returns a (steps, 2) array, X then Y."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=steps)
    eta = rng.normal(size=steps)
    y = np.zeros(steps)
    for t in range(1, steps):
        y[t] = 0.5 * y[t - 1] + 0.5 * x[t - 1] + eta[t]
    return np.column_stack([x, y])
