"""Command-line driver.

    revupdate example1 [--trials N] [--seed S] [--out DIR] [--formats csv,svg]
    revupdate example2 [--trials N_PER_VALUE] ...
    revupdate coverage --config run.json
    revupdate posterior --config run.json
    revupdate fisher-table --config run.json

Exit codes: 0 success, 2 config error, 3 numeric error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import presets
from .config import load_config
from .coverage import CoverageConfig, PriorStrategy, compare_reports, run_coverage
from .errors import ConfigError, RevUpdateError
from .fisher import analytic_fisher, numeric_fisher_oracle
from .grid import DEFAULT_POINTS, ParameterGrid
from .inference import fit_experiments_grid
from .models import model_from_dict
from .reporting import (
    coverage_csv,
    curve_svg,
    fisher_table_csv,
    posterior_csv,
    ranking_csv,
    write_coverage_svg,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _parse_formats(text):
    formats = [f.strip() for f in text.split(",") if f.strip()]
    bad = [f for f in formats if f not in ("csv", "svg")]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s): {', '.join(bad)}")
    return formats


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--out", metavar="DIR", help="output directory (default: ./out)")
    common.add_argument("--seed", type=int, metavar="U64", help="random seed")
    common.add_argument("--trials", type=int, metavar="N", help="number of trials")
    common.add_argument("--threads", type=int, metavar="N", help="worker threads")
    common.add_argument(
        "--formats", type=_parse_formats, metavar="LIST", help="comma list from csv,svg"
    )
    parser = argparse.ArgumentParser(
        prog="revupdate", description="Revised Bayesian updating: posteriors and coverage tests."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("example1", parents=[common], help="parameter and its cube (Gaussian)")
    sub.add_parser(
        "example2", parents=[common],
        help="binomial and negative binomial; --trials is per parameter value",
    )
    sub.add_parser("coverage", parents=[common], help="coverage run from a config")
    sub.add_parser("posterior", parents=[common], help="posterior curve from a config")
    sub.add_parser("fisher-table", parents=[common], help="analytic vs oracle Fisher information")
    return parser


class _Run:
    """Resolved options shared by every command."""

    def __init__(self, args, mode):
        self.config = load_config(args.config, mode) if args.config else {"mode": mode}
        cfg = self.config
        self.out = args.out or cfg.get("output") or "out"
        self.formats = args.formats or cfg.get("formats") or ["csv", "svg"]
        self.seed = args.seed if args.seed is not None else cfg.get("seed")
        self.trials = args.trials if args.trials is not None else cfg.get("num_trials")
        self.threads = args.threads or cfg.get("threads") or os.cpu_count() or 1
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer", key="seed")
        os.makedirs(self.out, exist_ok=True)

    def write(self, name, text, fmt="csv"):
        if fmt in self.formats:
            with open(os.path.join(self.out, name), "w", newline="", encoding="utf-8") as fh:
                fh.write(text)

    def svg(self, name, reports, title):
        if "svg" in self.formats:
            write_coverage_svg(reports, os.path.join(self.out, name), title)


def _run_panels(run, prefix, panels):
    for panel, configs in panels.items():
        reports = []
        for name, cfg in configs.items():
            report = run_coverage(cfg, threads=run.threads)
            reports.append(report)
            run.write(f"{prefix}_{name}.csv", coverage_csv(report))
        ranking = compare_reports(reports)
        run.write(f"{prefix}_{panel}_ranking.csv", ranking_csv(ranking))
        run.svg(f"{prefix}_{panel}.svg", reports, f"{prefix} {panel.replace('_', ' ')}")
        print(f"{prefix} {panel}:")
        for e in ranking:
            print(
                f"  {e.rank}. {e.label}: mad={e.mean_abs_deviation:.4f} "
                f"below5={e.tail_below_5:.3f} above95={e.tail_above_95:.3f}"
            )


def cmd_example1(args):
    run = _Run(args, "example1")
    ov = run.config.get("example", {})
    panels = presets.example1_configs(
        trials=run.trials or presets.EXAMPLE1_TRIALS,
        seed=presets.DEFAULT_SEED if run.seed is None else run.seed,
        sigma_a=ov.get("sigma_a", 1.0),
        sigma_b=ov.get("sigma_b", 1.0),
        theta_range=(
            ov.get("theta_low", presets.EXAMPLE1_THETA[0]),
            ov.get("theta_high", presets.EXAMPLE1_THETA[1]),
        ),
    )
    _run_panels(run, "example1", panels)
    return EXIT_OK


def cmd_example2(args):
    run = _Run(args, "example2")
    ov = run.config.get("example", {})
    panels = presets.example2_configs(
        trials_each=run.trials or presets.EXAMPLE2_TRIALS_EACH,
        seed=presets.DEFAULT_SEED if run.seed is None else run.seed,
        n=ov.get("n", presets.EXAMPLE2_N),
        r=ov.get("r", presets.EXAMPLE2_R),
        num_values=ov.get("num_values", presets.EXAMPLE2_VALUES),
        theta_range=(
            ov.get("theta_low", presets.EXAMPLE2_THETA[0]),
            ov.get("theta_high", presets.EXAMPLE2_THETA[1]),
        ),
    )
    _run_panels(run, "example2", panels)
    return EXIT_OK


def cmd_coverage(args):
    run = _Run(args, "coverage")
    spec = dict(run.config)
    if run.seed is not None:
        spec["seed"] = run.seed
    if run.trials is not None:
        spec["num_trials"] = run.trials
    config = CoverageConfig.from_dict(spec)
    report = run_coverage(config, threads=run.threads)
    run.write("coverage.csv", coverage_csv(report))
    run.svg("coverage.svg", [report], config.label)
    print(
        f"{config.label}: mad={report.mean_abs_deviation:.4f} "
        f"below5={report.tail_below_5:.3f} above95={report.tail_above_95:.3f}"
    )
    return EXIT_OK


def _require(cfg, key):
    if key not in cfg:
        raise ConfigError(f"missing required key '{key}'", key=key)
    return cfg[key]


def cmd_posterior(args):
    run = _Run(args, "posterior")
    cfg = run.config
    experiments = [
        (model_from_dict(e["model"]), e["observation"]) for e in _require(cfg, "experiments")
    ]
    prior_spec = dict(cfg.get("prior", {"kind": "combined"}))
    if "model" in prior_spec:
        prior_spec["model"] = model_from_dict(prior_spec["model"])
    strategy = PriorStrategy(**prior_spec)
    grid_spec = cfg.get("grid", {})
    num_points = grid_spec.get("num_points", DEFAULT_POINTS)
    if "lower" in grid_spec:
        grid = ParameterGrid(grid_spec["lower"], grid_spec["upper"], num_points)
    else:
        grid = fit_experiments_grid(experiments, num_points)
    post = strategy.posterior(experiments, grid)
    prior = strategy.prior_curve(experiments, grid)
    run.write("posterior.csv", posterior_csv(post, prior))
    run.write(
        "posterior.svg",
        curve_svg(grid.points, {"posterior density": post.density}, title="posterior"),
        fmt="svg",
    )
    print(f"posterior median {post.quantile(0.5):.6g} on [{grid.lower:.6g}, {grid.upper:.6g}]")
    return EXIT_OK


def cmd_fisher_table(args):
    run = _Run(args, "fisher-table")
    cfg = run.config
    specs = cfg["models"] if "models" in cfg else [_require(cfg, "model")]
    models = [model_from_dict(m) for m in specs]
    g = _require(cfg, "grid")
    grid = ParameterGrid(_require(g, "lower"), _require(g, "upper"), g.get("num_points", 99))
    curve = analytic_fisher(models[0], grid)
    for m in models[1:]:
        curve = curve + analytic_fisher(m, grid)
    oracle = np.array([numeric_fisher_oracle(models, t) for t in grid.points])
    text = fisher_table_csv(grid.points, curve.values, oracle)
    run.write("fisher_table.csv", text)
    run.write(
        "fisher_table.svg",
        curve_svg(grid.points, {"analytic": curve.values, "oracle": oracle}, title="Fisher information"),
        fmt="svg",
    )
    scale = np.maximum(np.abs(curve.values), np.abs(oracle))
    rel = np.divide(np.abs(curve.values - oracle), scale, out=np.zeros_like(scale), where=scale > 0)
    print(f"max relative error {rel.max():.3e} over {grid.num_points} points")
    return EXIT_OK


COMMANDS = {
    "example1": cmd_example1,
    "example2": cmd_example2,
    "coverage": cmd_coverage,
    "posterior": cmd_posterior,
    "fisher-table": cmd_fisher_table,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RevUpdateError, ArithmeticError, ValueError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
