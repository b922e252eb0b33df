"""Directed edge screening via Gaussian conditional transfer entropy.

For jointly Gaussian variables every (conditional) mutual information is
a log-determinant ratio of covariance blocks, so lag-one transfer
entropy

    TE(s -> t | C) = I(x_t(now); x_s(lag) | x_t(lag), x_C(lag))

can be read off a single lagged covariance of the series.  Sources for
each target are selected greedily: the candidate with the largest
conditional transfer entropy joins the conditioning set if it beats a
surrogate threshold built from circularly time-shifted copies of the
source (shifting destroys directed coupling but preserves the marginal
autostructure).  The output is a set of directed edges to be used as
penalty exemptions by the sparse reconstruction.

Estimates use the Gaussian plug-in formula throughout; series with a
degenerate (constant) component make the log-determinants meaningless
and are reported per target rather than failing the whole screen.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateVarianceError,
    InsufficientDataError,
    InvalidPairError,
)
from .linalg import empirical_covariance


@dataclass(frozen=True)
class TeConfig:
    """Screening thresholds and caps.

    ``n_surrogates`` circular shifts define the null scale; an edge must
    exceed mean + ``k_sigma`` standard deviations of the surrogate
    scores.  ``max_sources_per_target`` caps the greedy selection and
    ``max_edges_total`` (when set) keeps only the globally strongest
    edges afterwards.
    """

    k_sigma: float = 3.0
    n_surrogates: int = 10
    max_sources_per_target: int = 5
    max_edges_total: int | None = None

    def __post_init__(self):
        if self.n_surrogates < 2:
            raise ValueError(f"need at least 2 surrogates, got {self.n_surrogates}")
        if self.max_sources_per_target < 0:
            raise ValueError("max_sources_per_target must be nonnegative")
        if self.max_edges_total is not None and self.max_edges_total < 0:
            raise ValueError("max_edges_total must be nonnegative")


@dataclass(frozen=True)
class EdgeSet:
    """Screened directed edges (source, target) with their scores."""

    n: int
    edges: tuple[tuple[int, int], ...]
    scores: tuple[float, ...]
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.edges],
            "scores": list(self.scores),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EdgeSet":
        return cls(
            n=int(d["n"]),
            edges=tuple((int(s), int(t)) for s, t in d["edges"]),
            scores=tuple(float(v) for v in d["scores"]),
            warnings=tuple(d.get("warnings", ())),
        )


def gaussian_cmi(cov: np.ndarray, ix, iy, iz=()) -> float:
    """I(X; Y | Z) for jointly Gaussian variables from their covariance.

    ``ix``, ``iy``, ``iz`` index the blocks; an empty ``iz`` gives plain
    mutual information.  Units are nats.
    """
    cov = np.asarray(cov, dtype=float)
    ix, iy, iz = list(ix), list(iy), list(iz)
    if set(ix) & set(iy) or set(ix) & set(iz) or set(iy) & set(iz):
        raise InvalidPairError(f"index groups overlap: {ix}, {iy}, {iz}")

    def logdet(idx):
        if not idx:
            return 0.0
        sign, val = np.linalg.slogdet(cov[np.ix_(idx, idx)])
        if sign <= 0:
            raise DegenerateVarianceError(
                f"covariance block {idx} is not positive definite"
            )
        return val

    return 0.5 * (logdet(ix + iz) + logdet(iy + iz) - logdet(iz) - logdet(ix + iy + iz))


def lagged_covariance(data: np.ndarray) -> np.ndarray:
    """Covariance of (x[t], x[t-1]) pairs, shape (2n, 2n).

    Index i is variable i now, index n + i the same variable one step
    back.  All transfer-entropy terms for one series are blocks of this
    single matrix.
    """
    data = np.asarray(data, dtype=float)
    if data.ndim != 2:
        raise InsufficientDataError(f"expected a (steps, n) array, got {data.shape}")
    stacked = np.hstack([data[1:], data[:-1]])
    return empirical_covariance(stacked)


def conditional_te(lagged_cov: np.ndarray, n: int, source: int, target: int,
                   conds=()) -> float:
    """Lag-one transfer entropy source -> target given past of ``conds``.

    The target's own past is always conditioned on; ``conds`` lists
    additional source variables already accepted for this target.
    """
    if source == target:
        raise InvalidPairError(f"transfer entropy needs source != target, got {source}")
    for v in (source, target, *conds):
        if not 0 <= v < n:
            raise InvalidPairError(f"variable {v} out of range for n={n}")
    iz = [n + target] + [n + int(c) for c in conds]
    return gaussian_cmi(lagged_cov, [target], [n + source], iz)


def transfer_entropy(data, source: int, target: int, conds=()) -> float:
    """Convenience wrapper computing ``conditional_te`` from raw samples."""
    data = np.asarray(getattr(data, "data", data), dtype=float)
    return conditional_te(lagged_covariance(data), data.shape[1], source, target, conds)


def surrogate_threshold(values, k_sigma: float) -> float:
    """Acceptance level mean + k_sigma * std over surrogate scores."""
    values = np.asarray(values, dtype=float)
    return float(values.mean() + k_sigma * values.std())


def _surrogate_scores(data, source, target, conds, offsets):
    # Only the handful of involved columns is re-estimated per shift;
    # the full lagged covariance is never rebuilt.
    vals = []
    for off in offsets:
        shifted = np.roll(data[:, source], -int(off))
        cols = np.column_stack(
            [data[1:, target], shifted[:-1], data[:-1, target]]
            + [data[:-1, c] for c in conds]
        )
        cov = empirical_covariance(cols)
        vals.append(gaussian_cmi(cov, [0], [1], list(range(2, cols.shape[1]))))
    return vals


def _draw_offsets(rng, steps: int, count: int) -> np.ndarray:
    # Shifts stay at least steps // 10 away from zero (mod steps) so the
    # surrogate really is decoupled from the original alignment.
    lo = max(1, steps // 10)
    candidates = np.arange(lo, steps - lo + 1)
    if candidates.shape[0] < count:
        raise InsufficientDataError(
            f"{steps} steps cannot support {count} distinct surrogate shifts"
        )
    return rng.choice(candidates, size=count, replace=False)


def greedy_infer_sources(data, lagged_cov, target: int, config: TeConfig, rng):
    """Select sources for one target; returns (sources, scores)."""
    n = data.shape[1]
    selected: list[int] = []
    scores: list[float] = []
    while len(selected) < config.max_sources_per_target:
        candidates = [s for s in range(n) if s != target and s not in selected]
        if not candidates:
            break
        tes = [conditional_te(lagged_cov, n, s, target, selected) for s in candidates]
        best = int(np.argmax(tes))
        best_source, best_te = candidates[best], tes[best]
        offsets = _draw_offsets(rng, data.shape[0], config.n_surrogates)
        surrogates = _surrogate_scores(data, best_source, target, selected, offsets)
        if best_te <= surrogate_threshold(surrogates, config.k_sigma):
            break
        selected.append(best_source)
        scores.append(best_te)
    return selected, scores


def infer_edges(data, config: TeConfig | None = None, seed=None) -> EdgeSet:
    """Screen all directed edges of a multivariate series.

    Targets are processed independently (each with its own seeded stream,
    so results do not depend on target order).  A target whose estimates
    degenerate is skipped and reported in ``warnings``.
    """
    if config is None:
        config = TeConfig()
    data = np.asarray(getattr(data, "data", data), dtype=float)
    if data.ndim != 2:
        raise InsufficientDataError(f"expected a (steps, n) array, got {data.shape}")
    n = data.shape[1]
    cov = lagged_covariance(data)
    edges: list[tuple[int, int]] = []
    scores: list[float] = []
    warnings: list[str] = []
    for target in range(n):
        rng = np.random.default_rng(seed if seed is None else [seed, target])
        try:
            sources, tes = greedy_infer_sources(data, cov, target, config, rng)
        except DegenerateVarianceError as err:
            warnings.append(f"target {target}: {err}")
            continue
        edges.extend((s, target) for s in sources)
        scores.extend(tes)
    if config.max_edges_total is not None and len(edges) > config.max_edges_total:
        order = np.argsort(scores)[::-1][: config.max_edges_total]
        keep = sorted(int(k) for k in order)
        edges = [edges[k] for k in keep]
        scores = [scores[k] for k in keep]
    return EdgeSet(
        n=n, edges=tuple(edges), scores=tuple(scores), warnings=tuple(warnings)
    )
