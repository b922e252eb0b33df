"""Ground-truth network generation and stochastic simulation.

Networks are drawn as directed graphs with a fixed number of edges,
standard-normal weights, and no self loops, then shifted and scaled into
a stable state matrix: with b_max the largest real part among the
eigenvalues of the raw weight matrix B,

    A = -I + ((1 - epsilon) / b_max) B,

which places the spectral abscissa of A at -epsilon.  Larger epsilon
means a larger stability margin; epsilon = 1 (or an empty graph)
degenerates to A = -I.

Trajectories follow the Euler-Maruyama discretization

    x[k+1] = x[k] + dt * f(x[k]) + sqrt(dt) * xi[k],   xi[k] ~ N(0, I),

with f(x) = A x for the linear model and, for the saturating variant,
f_i(x) = A_ii x_i + sum_{j != i} tanh(A_ij x_j).  Both models consume
the noise stream identically, so paired runs from the same seed see the
same shocks.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BlowupError, DimensionMismatchError, RetryExhaustedError

# Trajectory magnitude treated as numerical escape to infinity.
_BLOWUP_LIMIT = 1e8


@dataclass(frozen=True)
class GeneratorConfig:
    """Shape of the random ground-truth ensemble."""

    n: int
    n_edges: int
    epsilon: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0 <= self.n_edges <= self.n * (self.n - 1):
            raise ValueError(
                f"n_edges must lie in [0, {self.n * (self.n - 1)}], got {self.n_edges}"
            )
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class SimConfig:
    """Discretization and length of one simulated trajectory.

    ``x0`` defaults to the origin; ``noise`` can be switched off to watch
    the deterministic relaxation instead (useful as a stability check,
    pointless from the default initial state).
    """

    dt: float = 0.1
    steps: int = 100_000
    x0: np.ndarray | None = None
    noise: bool = True

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.steps < 1:
            raise ValueError(f"steps must be positive, got {self.steps}")


@dataclass(frozen=True)
class TimeSeries:
    """Sampled trajectory: row k is the state after step k+1."""

    data: np.ndarray
    dt: float
    seed: object = None

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def steps(self) -> int:
        return self.data.shape[0]


def _offdiag_pair(idx: int, n: int) -> tuple[int, int]:
    # Ordered off-diagonal positions enumerated row-major with the
    # diagonal skipped.
    i, r = divmod(idx, n - 1)
    return i, r if r < i else r + 1


def random_hurwitz(
    config: GeneratorConfig, seed=None, max_retries: int = 100
) -> np.ndarray:
    """Draw a stable state matrix with exactly ``config.n_edges`` couplings.

    Edge positions are uniform over ordered off-diagonal slots, weights
    standard normal.  Draws whose raw weight matrix has no eigenvalue in
    the right half plane cannot be normalized onto abscissa -epsilon and
    are rejected wholesale.
    """
    n = config.n
    if config.n_edges == 0 or config.epsilon == 1.0:
        return -np.eye(n)
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        slots = rng.choice(n * (n - 1), size=config.n_edges, replace=False)
        weights = rng.normal(size=config.n_edges)
        b = np.zeros((n, n))
        for idx, w in zip(slots, weights):
            i, j = _offdiag_pair(int(idx), n)
            b[i, j] = w
        b_max = float(np.max(np.linalg.eigvals(b).real))
        if b_max > 0:
            return -np.eye(n) + ((1.0 - config.epsilon) / b_max) * b
    raise RetryExhaustedError(
        f"no right-half-plane weight draw in {max_retries} attempts "
        f"(n={n}, n_edges={config.n_edges})"
    )


def true_edges(a: np.ndarray, tol: float = 0.0) -> list[tuple[int, int]]:
    """Directed edges (source, target) given by off-diagonal entries of A.

    Entry (i, j) couples variable j into variable i, hence edge j -> i.
    """
    a = np.asarray(a)
    rows, cols = np.nonzero(np.abs(a) > tol)
    return [(int(j), int(i)) for i, j in zip(rows, cols) if i != j]


def _check_state_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"state matrix must be square, got {a.shape}")
    return a


def _run(a: np.ndarray, config: SimConfig, seed, step_fn) -> TimeSeries:
    n = a.shape[0]
    if config.x0 is None:
        x = np.zeros(n)
    else:
        x = np.asarray(config.x0, dtype=float).copy()
        if x.shape != (n,):
            raise DimensionMismatchError(
                f"x0 must have shape ({n},), got {x.shape}"
            )
    rng = np.random.default_rng(seed)
    # One block draw keeps the stream identical across drift models.
    shocks = rng.normal(size=(config.steps, n)) * np.sqrt(config.dt)
    if not config.noise:
        shocks = np.zeros_like(shocks)
    out = np.empty((config.steps, n))
    for k in range(config.steps):
        x = step_fn(x) + shocks[k]
        if np.abs(x).max() > _BLOWUP_LIMIT:
            raise BlowupError(f"trajectory exceeded {_BLOWUP_LIMIT:g} at step {k + 1}")
        out[k] = x
    return TimeSeries(data=out, dt=config.dt, seed=seed)


def simulate_linear(a: np.ndarray, config: SimConfig, seed=None) -> TimeSeries:
    """Euler-Maruyama trajectory of dx = A x dt + dW."""
    a = _check_state_matrix(a)
    propagator = np.eye(a.shape[0]) + config.dt * a
    return _run(a, config, seed, lambda x: propagator @ x)


def simulate_tanh(a: np.ndarray, config: SimConfig, seed=None) -> TimeSeries:
    """Like ``simulate_linear`` but with saturating couplings.

    Each off-diagonal influence passes through tanh; self-regulation
    stays linear, so the model agrees with the linear one near the origin.
    """
    a = _check_state_matrix(a)
    diag = np.diag(a).copy()
    coupling = a.copy()
    np.fill_diagonal(coupling, 0.0)
    dt = config.dt

    def step(x):
        drift = diag * x + np.tanh(coupling * x[None, :]).sum(axis=1)
        return x + dt * drift

    return _run(a, config, seed, step)
