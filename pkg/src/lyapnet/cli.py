"""Command-line front end.

Subcommands mirror the library pipeline: ``generate`` a ground truth,
``simulate`` it, ``infer-priors`` from the series, ``reconstruct`` from
a covariance or series, and ``benchmark`` / ``report`` for the ensemble
experiment.  Exit status is 0 on success, 1 when a computation fails
(unstable input, infeasible program, degenerate data), and 2 for usage
errors.
"""

import argparse
import sys

import numpy as np

from . import bench, io, recovery, simulate
from .errors import LyapnetError
from .te import TeConfig, infer_edges


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part)


def _cmd_generate(args) -> int:
    config = simulate.GeneratorConfig(n=args.n, n_edges=args.edges, epsilon=args.epsilon)
    a = simulate.random_hurwitz(config, seed=args.seed)
    io.save_matrix(args.output, a)
    return 0


def _cmd_simulate(args) -> int:
    a = io.load_matrix(args.matrix)
    config = simulate.SimConfig(dt=args.dt, steps=args.steps)
    run = simulate.simulate_linear if args.dynamics == "linear" else simulate.simulate_tanh
    ts = run(a, config, seed=args.seed)
    io.save_series(args.output, ts)
    return 0


def _cmd_infer_priors(args) -> int:
    ts = io.load_series(args.series)
    config = TeConfig(
        k_sigma=args.k_sigma,
        n_surrogates=args.surrogates,
        max_sources_per_target=args.max_sources,
        max_edges_total=args.edge_cap,
    )
    edges = infer_edges(ts.data, config, seed=args.seed)
    io.save_edge_set(args.output, edges)
    for line in edges.warnings:
        print(f"warning: {line}", file=sys.stderr)
    return 0


def _cmd_reconstruct(args) -> int:
    if args.cov is not None:
        gamma = io.load_matrix(args.cov)
    else:
        gamma = None
    edges = io.load_edge_set(args.priors) if args.priors else None
    kwargs = dict(
        ridge=args.ridge,
        diag_weight=args.diag_weight,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    if gamma is not None:
        result = recovery.reconstruct(gamma, edges, **kwargs)
    else:
        ts = io.load_series(args.series)
        result = recovery.reconstruct_from_series(ts.data, edges, **kwargs)
    io.save_json(args.output, result.to_dict())
    if result.optimal and args.matrix_out:
        io.save_matrix(args.matrix_out, result.a)
    if not result.optimal:
        print(f"error: reconstruction ended with status {result.status}",
              file=sys.stderr)
        return 1
    return 0


def _cmd_benchmark(args) -> int:
    config = bench.ExperimentConfig(
        n=args.n,
        edge_counts=args.edge_counts,
        trials=args.trials,
        epsilon=args.epsilon,
        dynamics=args.dynamics,
        sim=simulate.SimConfig(dt=args.dt, steps=args.steps),
        methods=tuple(args.methods.split(",")) if args.methods else bench.METHODS,
        exact_cov=args.exact_cov,
        ridge=args.ridge,
        diag_weight=args.diag_weight,
        seed=args.seed,
        workers=args.workers,
    )
    records = bench.run_experiment(config)
    bench.save_records_csv(args.output, records)
    failed = sum(1 for r in records if not np.isfinite(r.alignment))
    if failed:
        print(f"warning: {failed} of {len(records)} records have no score",
              file=sys.stderr)
    return 0


def _cmd_report(args) -> int:
    records = bench.load_records_csv(args.records)
    bench.report(records, args.outdir, seed=args.seed)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lyapnet",
        description="Sparse directed network reconstruction from stationary covariances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="draw a random stable ground-truth matrix")
    p.add_argument("--n", type=int, required=True, help="number of variables")
    p.add_argument("--edges", type=int, required=True, help="number of directed edges")
    p.add_argument("--epsilon", type=float, default=0.5, help="stability margin")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", required=True, help=".csv or .json matrix file")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("simulate", help="integrate the stochastic dynamics")
    p.add_argument("--matrix", required=True, help="state matrix file")
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--dynamics", choices=("linear", "tanh"), default="linear")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", required=True, help=".csv or .npy series file")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("infer-priors", help="screen directed edges by transfer entropy")
    p.add_argument("--series", required=True, help="series file with sidecar")
    p.add_argument("--k-sigma", type=float, default=3.0)
    p.add_argument("--surrogates", type=int, default=10)
    p.add_argument("--max-sources", type=int, default=5)
    p.add_argument("--edge-cap", type=int, default=None,
                   help="keep only this many strongest edges overall")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", required=True, help="edge-set JSON file")
    p.set_defaults(func=_cmd_infer_priors)

    p = sub.add_parser("reconstruct", help="recover the sparsest consistent matrix")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--cov", help="covariance matrix file")
    src.add_argument("--series", help="series file (covariance is estimated)")
    p.add_argument("--priors", default=None, help="edge-set JSON from infer-priors")
    p.add_argument("--ridge", type=float, default=0.0,
                   help="diagonal loading added to the covariance")
    p.add_argument("--diag-weight", type=float, default=0.0,
                   help="penalty weight on diagonal entries")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--matrix-out", default=None, help="also write the matrix itself")
    p.add_argument("-o", "--output", required=True, help="result JSON file")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("benchmark", help="run the ensemble recovery experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--edge-counts", type=_int_list, required=True,
                   help="comma-separated edge counts, e.g. 10,20,40")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--dynamics", choices=("linear", "tanh"), default="linear")
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--methods", default=None,
                   help="comma-separated subset of " + ",".join(bench.METHODS))
    p.add_argument("--exact-cov", action="store_true",
                   help="reconstruct from the analytic covariance instead of samples")
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--diag-weight", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output", required=True, help="records CSV file")
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("report", help="summarize and plot benchmark records")
    p.add_argument("--records", required=True, help="records CSV from benchmark")
    p.add_argument("--outdir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LyapnetError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
