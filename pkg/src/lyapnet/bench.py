"""Recovery benchmark over random ground-truth ensembles.

One cell of the experiment fixes an edge count and a trial index, draws
a stable ground-truth network, simulates it, and scores every method on
how well the recovered matrix matches the truth.  Methods:

* ``full_info``: sparse reconstruction given the true edge positions,
* ``te_info``: sparse reconstruction given transfer-entropy screening,
* ``no_info``: sparse reconstruction with no prior,
* ``precision``: the scaled negative inverse covariance, read directly,
* ``correlation``: the correlation matrix, read directly.

The score is the alignment between off-diagonal parts,

    align(A, B) = <off(A), off(B)> / (|off(A)| |off(B)|),

a cosine in [-1, 1] that ignores self-regulation and overall scale.
Every cell derives its random streams from (seed, edge count, trial),
so results are reproducible record by record and independent of
scheduling; trials parallelize across processes.
"""

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import LyapnetError, ZeroOffDiagonalError
from .linalg import (
    correlation_baseline,
    empirical_covariance,
    forward_lyapunov_solve,
    precision_baseline,
)
from .recovery import reconstruct
from .simulate import GeneratorConfig, SimConfig, random_hurwitz, simulate_linear, \
    simulate_tanh, true_edges
from .te import TeConfig, infer_edges

METHODS = ("full_info", "te_info", "no_info", "precision", "correlation")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one benchmark run."""

    n: int
    edge_counts: tuple[int, ...]
    trials: int
    epsilon: float = 0.5
    dynamics: str = "linear"
    sim: SimConfig = field(default_factory=SimConfig)
    te: TeConfig = field(default_factory=TeConfig)
    methods: tuple[str, ...] = METHODS
    exact_cov: bool = False
    ridge: float = 0.0
    diag_weight: float = 0.0
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.dynamics not in ("linear", "tanh"):
            raise ValueError(f"dynamics must be 'linear' or 'tanh', got {self.dynamics}")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")


@dataclass(frozen=True)
class ResultRecord:
    """Score of one method on one ground-truth draw."""

    method: str
    n_edges: int
    trial: int
    alignment: float
    status: str


def alignment(a_true: np.ndarray, a_hat: np.ndarray) -> float:
    """Cosine similarity of the off-diagonal parts of two matrices."""
    a_true = np.asarray(a_true, dtype=float)
    a_hat = np.asarray(a_hat, dtype=float)
    mask = ~np.eye(a_true.shape[0], dtype=bool)
    u = a_true[mask]
    v = a_hat[mask]
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroOffDiagonalError("alignment undefined for a diagonal matrix")
    return float(u @ v / (nu * nv))


def _child_seed(*path) -> int:
    return int(np.random.SeedSequence(list(path)).generate_state(1)[0])


def _score(a_true, a_hat, status: str) -> tuple[float, str]:
    try:
        return alignment(a_true, a_hat), status
    except ZeroOffDiagonalError:
        return float("nan"), "zero_offdiagonal"


def _run_cell(config: ExperimentConfig, n_edges: int, trial: int) -> list[ResultRecord]:
    gen = GeneratorConfig(n=config.n, n_edges=n_edges, epsilon=config.epsilon)
    a_true = random_hurwitz(gen, seed=[config.seed, n_edges, trial, 0])
    simulate = simulate_linear if config.dynamics == "linear" else simulate_tanh
    need_series = (not config.exact_cov) or ("te_info" in config.methods)
    series = None
    if need_series:
        series = simulate(a_true, config.sim, seed=[config.seed, n_edges, trial, 1])
    if config.exact_cov:
        gamma = forward_lyapunov_solve(a_true)
    else:
        gamma = empirical_covariance(series.data)
    records = []
    for method in config.methods:
        try:
            if method in ("full_info", "te_info", "no_info"):
                if method == "full_info":
                    edges = true_edges(a_true)
                elif method == "te_info":
                    edges = infer_edges(
                        series.data, config.te, seed=_child_seed(config.seed, n_edges, trial, 2)
                    )
                else:
                    edges = None
                result = reconstruct(
                    gamma, edges, ridge=config.ridge, diag_weight=config.diag_weight
                )
                if result.optimal:
                    score, status = _score(a_true, result.a, result.status)
                else:
                    score, status = float("nan"), result.status
            elif method == "precision":
                score, status = _score(a_true, precision_baseline(gamma), "ok")
            else:
                score, status = _score(a_true, correlation_baseline(gamma), "ok")
        except LyapnetError as err:
            score, status = float("nan"), f"error: {err}"
        records.append(
            ResultRecord(
                method=method, n_edges=n_edges, trial=trial,
                alignment=score, status=status,
            )
        )
    return records


def _run_cell_star(args):
    return _run_cell(*args)


def run_experiment(config: ExperimentConfig) -> list[ResultRecord]:
    """Score all methods over all cells; records come back sorted."""
    tasks = [
        (config, n_edges, trial)
        for n_edges in config.edge_counts
        for trial in range(config.trials)
    ]
    if config.workers > 1:
        serial = replace(config, workers=1)
        tasks = [(serial, p, t) for _, p, t in tasks]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_run_cell_star, tasks))
    else:
        chunks = [_run_cell(*task) for task in tasks]
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda r: (r.n_edges, r.trial, r.method))
    return records


def bootstrap_median_pvalue(x, y, n_boot: int = 10_000, seed=0) -> float:
    """Two-sided bootstrap p-value for a difference of medians.

    Both samples are resampled with replacement; the p-value is twice
    the smaller tail of the resampled median-difference distribution
    around zero, floored at 1 / n_boot.  A diagnostic for reading the
    benchmarks, not a replacement for a designed test.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size == 0 or y.size == 0:
        return float("nan")
    rng = np.random.default_rng(seed)
    xb = rng.choice(x, size=(n_boot, x.size), replace=True)
    yb = rng.choice(y, size=(n_boot, y.size), replace=True)
    diff = np.median(xb, axis=1) - np.median(yb, axis=1)
    p = 2.0 * min(np.mean(diff <= 0.0), np.mean(diff >= 0.0))
    return float(min(1.0, max(p, 1.0 / n_boot)))


def _clean(records, method, n_edges):
    vals = [
        r.alignment
        for r in records
        if r.method == method and r.n_edges == n_edges and np.isfinite(r.alignment)
    ]
    return np.asarray(vals)


def summarize(records: list[ResultRecord], seed=0) -> dict:
    """Quartiles per method and edge count, plus pairwise median p-values."""
    edge_counts = sorted({r.n_edges for r in records})
    methods = sorted({r.method for r in records})
    out = {"cells": [], "pvalues": []}
    for n_edges in edge_counts:
        for method in methods:
            vals = _clean(records, method, n_edges)
            cell = {"method": method, "n_edges": n_edges, "count": int(vals.size)}
            if vals.size:
                q1, q2, q3 = np.percentile(vals, [25, 50, 75])
                cell.update(median=float(q2), q1=float(q1), q3=float(q3))
            out["cells"].append(cell)
        for i, mi in enumerate(methods):
            for mj in methods[i + 1 :]:
                p = bootstrap_median_pvalue(
                    _clean(records, mi, n_edges), _clean(records, mj, n_edges), seed=seed
                )
                out["pvalues"].append(
                    {"n_edges": n_edges, "a": mi, "b": mj, "pvalue": p}
                )
    return out


def save_records_csv(path, records: list[ResultRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "n_edges", "trial", "alignment", "status"])
        for r in records:
            writer.writerow([r.method, r.n_edges, r.trial, repr(r.alignment), r.status])


def load_records_csv(path) -> list[ResultRecord]:
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(
                ResultRecord(
                    method=row["method"],
                    n_edges=int(row["n_edges"]),
                    trial=int(row["trial"]),
                    alignment=float(row["alignment"]),
                    status=row["status"],
                )
            )
    return records


def report(records: list[ResultRecord], outdir, seed=0) -> dict:
    """Write records.csv, summary.json, and one notched boxplot per edge count.

    Returns the summary dictionary.  Plots are SVG so diffs stay textual.
    """
    from matplotlib.figure import Figure

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    save_records_csv(outdir / "records.csv", records)
    summary = summarize(records, seed=seed)
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2))
    methods = sorted({r.method for r in records})
    for n_edges in sorted({r.n_edges for r in records}):
        groups = [_clean(records, m, n_edges) for m in methods]
        keep = [(m, g) for m, g in zip(methods, groups) if g.size]
        if not keep:
            continue
        fig = Figure(figsize=(1.5 * len(keep) + 2, 4))
        ax = fig.add_subplot(111)
        ax.boxplot([g for _, g in keep], notch=True)
        ax.set_xticklabels([m for m, _ in keep], rotation=20)
        ax.set_ylabel("alignment")
        ax.set_title(f"{n_edges} edges")
        ax.axhline(0.0, color="0.7", lw=0.8, zorder=0)
        fig.tight_layout()
        fig.savefig(outdir / f"alignment_edges{n_edges}.svg")
    return summary
