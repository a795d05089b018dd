"""Command-line interface.

Subcommands: ``stats``, ``circle``, ``embed``, ``knn``, ``graph``, ``topology``.
Exit status is 0 on success, 1 on input errors and 2 when a variable has
zero Riemannian variance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .data import DataTable, InputError, PipelineConfig, load_csv, standardize
from .embedding import embed, fit_curve
from .local_metric import umap_distance_matrix
from .pipeline import build_graph, run
from .stats import DegenerateVarianceError
from .svg import circle_svg
from .topology import sweep


def _floats(a) -> list:
    return np.asarray(a, dtype=np.float64).tolist()


def _dumps(obj) -> str:
    # repr-based float output round-trips exactly, so equal runs give equal bytes
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_table(path: str) -> DataTable:
    try:
        with open(path, "rb") as fh:
            return load_csv(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _config(args) -> PipelineConfig:
    return PipelineConfig(
        k=args.k,
        min_dist=args.min_dist,
        n_epochs=args.epochs,
        seed=args.seed,
        metric_mode=args.metric_mode,
        disconnect_policy=args.disconnect.replace("-", "_"),
        standardize=args.standardize,
    )


def report(result, baseline_pearson: bool = False) -> dict:
    """JSON-ready summary of a pipeline run."""
    table = result.table
    m = result.mean
    circle = result.circle
    out = {
        "config": {**result.config.as_dict(), "baseline_pearson": baseline_pearson},
        "mean": {
            "label": table.row_labels[m.index],
            "index": m.index,
            "coordinates": _floats(m.g),
            "objective": float(m.objective),
        },
        "rho": _floats(result.cov.rho),
        "S": _floats(result.cov.S),
        "R": _floats(result.R),
        "circle": {
            "variables": [
                {"label": lab, "x": float(x), "y": float(y), "norm": float(nrm)}
                for lab, (x, y), nrm in zip(table.col_labels, circle.coords, circle.norms)
            ],
            "orthogonalized": circle.orthogonalized,
        },
        "embedding": {
            "rows": list(table.row_labels),
            "coordinates": _floats(result.embedding.coords),
            "epochs": result.embedding.epochs,
            "cross_entropy": float(result.embedding.cross_entropy),
            "spectral_init": result.embedding.spectral,
        },
        "diagnostics": {"warnings": list(circle.warnings), "pearson_violations": []},
    }
    if result.pearson is not None:
        norms = np.sqrt(np.sum(result.pearson**2, axis=1))
        out["pearson"] = [
            {"label": lab, "x": float(x), "y": float(y), "norm": float(nrm)}
            for lab, (x, y), nrm in zip(table.col_labels, result.pearson, norms)
        ]
        out["diagnostics"]["pearson_violations"] = [
            lab for lab, nrm in zip(table.col_labels, norms) if nrm > 1.0
        ]
    return out


def cmd_stats(args) -> None:
    result = run(_read_table(args.csv), _config(args), args.baseline_pearson)
    _write(_dumps(report(result, args.baseline_pearson)), args.output)


def cmd_circle(args) -> None:
    result = run(_read_table(args.csv), _config(args), args.baseline_pearson)
    svg = circle_svg(result.circle.coords, result.table.col_labels, result.pearson)
    _write(svg, args.output)


def cmd_embed(args) -> None:
    config = _config(args)
    table = standardize(_read_table(args.csv), config.standardize)
    _, _, graph = build_graph(table, config)
    emb = embed(graph, fit_curve(config.min_dist, config.spread), config.n_epochs, config.seed)
    lines = ["label,C1,C2"]
    for label, (x, y) in zip(table.row_labels, emb.coords[:, :2]):
        lines.append(f"{_csv_cell(label)},{float(x)!r},{float(y)!r}")
    _write("\n".join(lines) + "\n", args.output)


def _csv_cell(s: str) -> str:
    if any(c in s for c in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def cmd_knn(args) -> None:
    config = _config(args)
    table = standardize(_read_table(args.csv), config.standardize)
    nbrs, _, _ = build_graph(table, config)
    out = {
        "k": config.k,
        "neighbors": [
            {
                "label": table.row_labels[i],
                "index": i,
                "neighbors": [
                    {"index": j, "label": table.row_labels[j], "distance": d}
                    for j, d in row
                ],
            }
            for i, row in enumerate(nbrs.as_lists())
        ],
    }
    _write(_dumps(out), args.output)


def cmd_graph(args) -> None:
    config = _config(args)
    table = standardize(_read_table(args.csv), config.standardize)
    _, scales, graph = build_graph(table, config)
    dist = umap_distance_matrix(graph, config.metric_mode, config.disconnect_policy, table)
    ei, ej = graph.edges()
    di, dj = np.nonzero(graph.w)
    out = {
        "config": config.as_dict(),
        "labels": list(table.row_labels),
        "scales": {
            "rho": _floats(scales.rho),
            "sigma": _floats(scales.sigma),
            "clamped": scales.clamped.tolist(),
            "target": scales.target,
        },
        "directed": [{"i": int(i), "j": int(j), "w": float(graph.w[i, j])} for i, j in zip(di, dj)],
        "edges": [
            {"i": int(i), "j": int(j), "mu": float(graph.mu[i, j]), "ell": float(graph.ell[i, j])}
            for i, j in zip(ei, ej)
        ],
        "bridges": [{"i": u, "j": v, "ell": wt} for u, v, wt in dist.bridges],
        "distance_mode": dist.mode,
        "distances": _floats(dist.values),
    }
    _write(_dumps(out), args.output)


def _parse_sweep(text: str) -> np.ndarray:
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise InputError(f"--sweep expects lo:hi:steps, got {text!r}") from None
    if steps < 1 or lo <= 0 or hi < lo:
        raise InputError(f"invalid sweep {text!r}")
    return np.linspace(lo, hi, steps)


def cmd_topology(args) -> None:
    table = _read_table(args.csv)
    if args.sweep:
        eps = _parse_sweep(args.sweep)
    elif args.epsilon is not None:
        eps = [args.epsilon]
    else:
        raise InputError("give --epsilon or --sweep")
    if args.epsilon is not None and args.sweep:
        eps = sorted({*map(float, eps), float(args.epsilon)})
    out = {"n_points": table.n, "dimension": table.p, "results": sweep(table.values, eps)}
    _write(_dumps(out), args.output)


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("csv", help="input CSV (header row; optional label column)")
    p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--min-dist", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--metric-mode", choices=("geodesic", "minimax"), default="geodesic")
    p.add_argument("--disconnect", choices=("euclidean-bridge", "fail"), default="euclidean-bridge")
    p.add_argument("--standardize", choices=("none", "zscore"), default="none")
    p.add_argument("--baseline-pearson", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riemstats", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_ in [
        ("stats", cmd_stats, "Riemannian mean, covariance, correlation and circle as JSON"),
        ("circle", cmd_circle, "correlation circle as SVG"),
        ("embed", cmd_embed, "2-D layout as CSV"),
        ("knn", cmd_knn, "nearest-neighbor lists as JSON"),
        ("graph", cmd_graph, "local scales, memberships and distances as JSON"),
    ]:
        p = sub.add_parser(name, help=help_)
        _add_pipeline_flags(p)
        p.set_defaults(func=fn)
    p = sub.add_parser("topology", help="Čech complex simplex counts and Betti numbers as JSON")
    p.add_argument("csv", help="CSV of point coordinates")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--sweep", default=None, metavar="LO:HI:STEPS")
    p.set_defaults(func=cmd_topology)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except DegenerateVarianceError as exc:
        print(f"riemstats: degenerate variance: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"riemstats: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
