"""Command-line entry points.

Subcommands:

    sparsity   sparsity of a vector read from CSV/text
    verify     run the criteria harness against a metric order
    normalize  per-column centralised sparsity of a dataset CSV
    recover    one compression/recovery round trip with MSE
    grid       the full experiment lattice, CSV out
    report     optimal-order curves from a results CSV

All randomness flows from explicit ``--seed`` flags; ``grid`` output is
byte-identical for a fixed config at any ``--parallelism``, whose default
comes from the ``DIFFSPARSITY_PARALLELISM`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .core import gini_index, make_signal
from .criteria import verify_criteria
from .experiment import (
    ExperimentGrid,
    ResultTable,
    emit,
    optimal_order,
    reports_to_json,
    run_grid,
    SignalSpec,
    generate_signal,
)
from .fast import gds
from .normalize import centralized_sparsity, fit_stats
from .recover import SpsaConfig, gaussian_projection, spsa_recover

PARALLELISM_ENV = "DIFFSPARSITY_PARALLELISM"


def _read_vector(path: str) -> np.ndarray:
    """All numbers in a text/CSV file, in order, as a 1-D array."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ValueError(f"no numeric data in {path!r}")
    return np.array([float(t) for t in tokens])


def _read_matrix(path: str, header: bool) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2)
    return data


def _default_parallelism() -> int:
    raw = os.environ.get(PARALLELISM_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _cmd_sparsity(args) -> int:
    signal = make_signal(_read_vector(args.vector))
    value = gds(signal, args.order, method=args.method)
    if args.json:
        print(json.dumps({"order": value.order.p, "n": value.n, "value": value.value,
                          "gini": gini_index(signal).value}))
    else:
        print(value.value)
    return 0


def _cmd_verify(args) -> int:
    metric_order = args.order

    def metric(values):
        return gds(make_signal(values), metric_order).value

    reports = verify_criteria(metric, trials=args.trials, seed=args.seed)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(reports_to_json(reports))
    for report in reports:
        status = "ok" if report.violations == 0 else "VIOLATED"
        print(
            f"{report.name:>4}  trials={report.trials}  violations={report.violations}"
            f"  worst_margin={report.worst_margin:.3e}  [{status}]"
        )
    return 0 if all(r.violations == 0 for r in reports) else 1


def _cmd_normalize(args) -> int:
    dataset = fit_stats(_read_matrix(args.dataset, args.header))
    lines = ["column,sparsity,n_used"]
    for j in range(dataset.n_samples):
        value = centralized_sparsity(dataset, j, order=args.order)
        lines.append(f"{j},{value.value!r},{value.n}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _spsa_config(args) -> SpsaConfig:
    return SpsaConfig(
        iterations=args.spsa_iterations,
        a=args.spsa_a,
        A_stab=args.spsa_a_stab,
        alpha=args.spsa_alpha,
        c=args.spsa_c,
        gamma=args.spsa_gamma,
        restarts=args.spsa_restarts,
        seed=args.seed,
        step_scale=args.spsa_step_scale,
        track_iterates=not args.spsa_no_track,
    )


def _cmd_recover(args) -> int:
    if args.input:
        x0 = _read_vector(args.input)
    else:
        spec = SignalSpec(n=args.n, k_fraction=args.k_fraction,
                          distribution=args.distribution, seed=args.seed)
        x0 = generate_signal(spec)
    setup = gaussian_projection(args.m, x0.size, seed=args.seed)
    y = setup.project(x0)
    result = spsa_recover(setup, y, order=args.order, config=_spsa_config(args), x_true=x0)
    payload = {
        "n": int(x0.size),
        "m": args.m,
        "order": float(args.order),
        "mse": result.mse,
        "signal_power": float(np.mean(x0**2)),
        "objective": result.objective.value,
        "iterations_used": result.iterations_used,
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


def _grid_from_config(path: str) -> ExperimentGrid:
    with open(path, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    spsa = SpsaConfig(**config.pop("spsa", {}))
    known = {"n", "distributions", "k_fractions", "m_values", "p_values", "trials", "base_seed"}
    unknown = set(config) - known
    if unknown:
        raise ValueError(f"unknown grid config keys: {sorted(unknown)}")
    return ExperimentGrid(spsa=spsa, **{k: v for k, v in config.items()})


def _cmd_grid(args) -> int:
    grid = _grid_from_config(args.config)
    table = run_grid(grid, parallelism=args.parallelism)
    emit(table, "csv", args.out)
    if args.aggregate_out:
        emit(table, "heatmap", args.aggregate_out)
    failures = sum(1 for row in table.rows if row.error)
    print(f"wrote {len(table)} rows to {args.out}" + (f" ({failures} failed cells)" if failures else ""))
    return 0


def _cmd_report(args) -> int:
    with open(args.results, "r", encoding="utf-8") as fh:
        table = ResultTable.from_csv(fh.read())
    curve = optimal_order(table, marginal="by_M" if args.by == "m" else "by_K")
    if args.out:
        emit(curve, args.format, args.out)
    else:
        for axis, mean_p in curve:
            print(f"{axis},{mean_p}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffsparsity", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sparsity = sub.add_parser("sparsity", help="sparsity of a CSV vector")
    p_sparsity.add_argument("vector", help="path to a text/CSV file of coefficients")
    p_sparsity.add_argument("--order", type=float, default=1.0)
    path_group = p_sparsity.add_mutually_exclusive_group()
    path_group.add_argument("--auto", dest="method", action="store_const", const="auto")
    path_group.add_argument("--fast", dest="method", action="store_const", const="fast")
    path_group.add_argument("--naive", dest="method", action="store_const", const="naive")
    p_sparsity.set_defaults(method="auto")
    p_sparsity.add_argument("--json", action="store_true", help="emit a JSON record")
    p_sparsity.set_defaults(func=_cmd_sparsity)

    p_verify = sub.add_parser("verify", help="run the sparsity-criteria harness")
    p_verify.add_argument("--trials", type=int, default=1000)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--order", type=float, default=1.0)
    p_verify.add_argument("--json", metavar="PATH", help="also write a JSON report")
    p_verify.set_defaults(func=_cmd_verify)

    p_norm = sub.add_parser("normalize", help="centralised sparsity per dataset column")
    p_norm.add_argument("dataset", help="CSV, rows = coefficients, columns = samples")
    p_norm.add_argument("--order", type=float, default=1.0)
    p_norm.add_argument("--header", action="store_true", help="skip a header row")
    p_norm.add_argument("--out", help="write CSV here instead of stdout")
    p_norm.set_defaults(func=_cmd_normalize)

    p_recover = sub.add_parser("recover", help="single compress/recover round trip")
    p_recover.add_argument("--input", help="CSV vector to compress (otherwise synthesised)")
    p_recover.add_argument("--n", type=int, default=100)
    p_recover.add_argument("--k-fraction", type=float, default=0.1)
    p_recover.add_argument("--distribution", default="exponential")
    p_recover.add_argument("--m", type=int, required=True, help="projected dimensions")
    p_recover.add_argument("--order", type=float, default=4)
    p_recover.add_argument("--seed", type=int, default=0)
    p_recover.add_argument("--json", metavar="PATH", help="also write the JSON record")
    p_recover.add_argument("--spsa-iterations", type=int, default=2000)
    p_recover.add_argument("--spsa-restarts", type=int, default=3)
    p_recover.add_argument("--spsa-a", type=float, default=None)
    p_recover.add_argument("--spsa-a-stab", type=float, default=None)
    p_recover.add_argument("--spsa-c", type=float, default=0.05)
    p_recover.add_argument("--spsa-alpha", type=float, default=0.602)
    p_recover.add_argument("--spsa-gamma", type=float, default=0.101)
    p_recover.add_argument("--spsa-step-scale", type=float, default=0.1)
    p_recover.add_argument("--spsa-no-track", action="store_true",
                           help="skip the per-iteration best-iterate evaluation")
    p_recover.set_defaults(func=_cmd_recover)

    p_grid = sub.add_parser("grid", help="run the experiment grid")
    p_grid.add_argument("--config", required=True, help="JSON grid configuration")
    p_grid.add_argument("--out", required=True, help="raw results CSV path")
    p_grid.add_argument("--aggregate-out", help="optional per-cell aggregate CSV path")
    p_grid.add_argument("--parallelism", type=int, default=_default_parallelism())
    p_grid.set_defaults(func=_cmd_grid)

    p_report = sub.add_parser("report", help="optimal-order curve from results CSV")
    p_report.add_argument("results", help="raw results CSV from the grid subcommand")
    p_report.add_argument("--by", choices=("m", "k"), default="m")
    p_report.add_argument("--format", choices=("csv", "json"), default="csv")
    p_report.add_argument("--out", help="write here instead of stdout")
    p_report.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
