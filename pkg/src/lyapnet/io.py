"""File formats for matrices, trajectories, edge sets, and LP problems.

Matrices travel either as plain CSV (one row per line, ``#`` comments
and a single header line tolerated) or as JSON ``{"n": ..., "data":
[[...]]}``.  Sparse systems use triplet CSV with a ``row,col,value``
header and zero-based indices.  Trajectories are stored as CSV or
``.npy`` with a JSON sidecar ``<file>.meta.json`` carrying ``n``,
``steps``, ``dt``, and ``seed``, so a directory of runs stays
self-describing.
"""

import json
from pathlib import Path

import numpy as np
import scipy.sparse

from .lp import LpProblem
from .simulate import TimeSeries
from .te import EdgeSet


def save_matrix_csv(path, a: np.ndarray) -> None:
    np.savetxt(path, np.atleast_2d(np.asarray(a, dtype=float)), delimiter=",",
               fmt="%.17g")


def load_matrix_csv(path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except ValueError:
        # Tolerate one non-numeric header line wherever it sits among
        # the comments.
        lines = [ln for ln in Path(path).read_text().splitlines()
                 if ln.strip() and not ln.lstrip().startswith("#")]
        return np.loadtxt(lines[1:], delimiter=",", ndmin=2)


def save_matrix_json(path, a: np.ndarray) -> None:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    Path(path).write_text(json.dumps({"n": a.shape[0], "data": a.tolist()}))


def load_matrix_json(path) -> np.ndarray:
    d = json.loads(Path(path).read_text())
    a = np.asarray(d["data"], dtype=float)
    if a.shape[0] != d["n"]:
        raise ValueError(f"{path}: header n={d['n']} does not match {a.shape[0]} rows")
    return a


def save_matrix(path, a: np.ndarray) -> None:
    """Dispatch on suffix: .json or anything CSV-like."""
    if str(path).endswith(".json"):
        save_matrix_json(path, a)
    else:
        save_matrix_csv(path, a)


def load_matrix(path) -> np.ndarray:
    if str(path).endswith(".json"):
        return load_matrix_json(path)
    return load_matrix_csv(path)


def save_triplets_csv(path, rows, cols, vals, shape: tuple[int, int]) -> None:
    with open(path, "w") as fh:
        fh.write(f"# shape,{shape[0]},{shape[1]}\n")
        fh.write("row,col,value\n")
        for r, c, v in zip(rows, cols, vals):
            fh.write(f"{int(r)},{int(c)},{v:.17g}\n")


def load_triplets_csv(path):
    """Returns (rows, cols, vals, shape); shape may be None if unstated."""
    shape = None
    with open(path) as fh:
        first = fh.readline()
    if first.startswith("# shape"):
        parts = first.strip().split(",")
        shape = (int(parts[1]), int(parts[2]))
    raw = np.loadtxt(path, delimiter=",", comments="#", skiprows=1 if shape is None else 2,
                     ndmin=2)
    if raw.size == 0:
        return np.array([], int), np.array([], int), np.array([]), shape
    return raw[:, 0].astype(int), raw[:, 1].astype(int), raw[:, 2], shape


def _sidecar_path(path) -> Path:
    return Path(f"{path}.meta.json")


def save_series(path, ts: TimeSeries) -> None:
    """CSV for .csv paths (one row per channel), raw .npy otherwise.

    Either layout gets a JSON sidecar; in memory a series is always
    (steps, n).
    """
    path = Path(path)
    if path.suffix == ".csv":
        np.savetxt(path, ts.data.T, delimiter=",", fmt="%.17g")
    else:
        np.save(path, ts.data)
        if path.suffix != ".npy":
            path = path.with_suffix(path.suffix + ".npy")
    seed = ts.seed
    if seed is not None and not isinstance(seed, (int, list)):
        seed = list(np.asarray(seed).tolist()) if np.ndim(seed) else int(seed)
    _sidecar_path(path).write_text(
        json.dumps({"n": ts.n, "steps": ts.steps, "dt": ts.dt, "seed": seed})
    )


def load_series(path) -> TimeSeries:
    path = Path(path)
    if path.suffix == ".csv":
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2).T
    else:
        data = np.load(path)
    meta = json.loads(_sidecar_path(path).read_text())
    if data.shape != (meta["steps"], meta["n"]):
        raise ValueError(
            f"{path}: sidecar says {(meta['steps'], meta['n'])}, file has {data.shape}"
        )
    return TimeSeries(data=data, dt=float(meta["dt"]), seed=meta.get("seed"))


def save_edge_set(path, edges: EdgeSet) -> None:
    Path(path).write_text(json.dumps(edges.to_dict()))


def load_edge_set(path) -> EdgeSet:
    return EdgeSet.from_dict(json.loads(Path(path).read_text()))


def _block_to_dict(a):
    if a is None:
        return None
    coo = scipy.sparse.coo_matrix(a)
    return {
        "shape": list(coo.shape),
        "row": coo.row.tolist(),
        "col": coo.col.tolist(),
        "val": coo.data.tolist(),
    }


def _block_from_dict(d):
    if d is None:
        return None
    return scipy.sparse.coo_matrix(
        (d["val"], (d["row"], d["col"])), shape=tuple(d["shape"])
    ).tocsr()


def save_lp(path, problem: LpProblem) -> None:
    Path(path).write_text(
        json.dumps(
            {
                "c": problem.c.tolist(),
                "a_eq": _block_to_dict(problem.a_eq),
                "b_eq": None if problem.b_eq is None else problem.b_eq.tolist(),
                "a_ub": _block_to_dict(problem.a_ub),
                "b_ub": None if problem.b_ub is None else problem.b_ub.tolist(),
            }
        )
    )


def load_lp(path) -> LpProblem:
    d = json.loads(Path(path).read_text())
    return LpProblem(
        c=np.asarray(d["c"], dtype=float),
        a_eq=_block_from_dict(d["a_eq"]),
        b_eq=None if d["b_eq"] is None else np.asarray(d["b_eq"], dtype=float),
        a_ub=_block_from_dict(d["a_ub"]),
        b_ub=None if d["b_ub"] is None else np.asarray(d["b_ub"], dtype=float),
    )


def save_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2))


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())
