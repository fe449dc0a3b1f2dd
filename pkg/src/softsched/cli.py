"""Command-line front end for the experiment harness.

Precedence for settings: built-in defaults, then a --config JSON file, then
explicit command-line flags. Exit code 0 on success, 1 on any error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .harness import (
    ExperimentConfig,
    load_fixture,
    run_sweep,
    write_detail,
    write_results,
)

_DEFAULTS = ExperimentConfig()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="softsched",
        description=(
            "TDMA link-schedule simulator: soft coloring via a link-vs-component "
            "matrix game, benchmarked against greedy coloring and no scheduling."
        ),
    )
    p.add_argument("--nodes", type=int, help=f"network size (default {_DEFAULTS.n_nodes})")
    p.add_argument("--sessions", type=int,
                   help=f"source-sink session count (default {_DEFAULTS.n_sessions})")
    p.add_argument("--beta-min", type=float,
                   help=f"sweep start, dB (default {_DEFAULTS.beta_min_db})")
    p.add_argument("--beta-max", type=float,
                   help=f"sweep end, dB (default {_DEFAULTS.beta_max_db})")
    p.add_argument("--beta-step", type=float,
                   help=f"sweep step, dB (default {_DEFAULTS.beta_step_db})")
    p.add_argument("--alpha", type=float,
                   help=f"attenuation exponent (default {_DEFAULTS.alpha})")
    p.add_argument("--poisson-mean", type=float,
                   help=f"mean packets per session (default {_DEFAULTS.poisson_mean})")
    p.add_argument("--runs", type=int,
                   help=f"independent replications (default {_DEFAULTS.runs})")
    p.add_argument("--seed", type=int, help=f"root RNG seed (default {_DEFAULTS.seed})")
    p.add_argument("--solver", choices=["fp", "exact"],
                   help="game solver: fictitious play or the exact small-instance oracle")
    p.add_argument("--delta", type=float,
                   help=f"fictitious-play convergence gap (default {_DEFAULTS.delta})")
    p.add_argument("--max-iters", type=int, dest="max_iters",
                   help=f"fictitious-play iteration budget (default {_DEFAULTS.max_iterations})")
    p.add_argument("--modes", help="comma-separated subset of soft,coloring,none")
    p.add_argument("--fixture", help="topology or conflict-graph fixture file; bypasses generation")
    p.add_argument("--config", help="JSON file with ExperimentConfig fields; flags override it")
    p.add_argument("--out", default="results.csv", help="aggregated CSV path (default results.csv)")
    p.add_argument("--detail", help="optional per-run CSV path")
    return p


_FLAG_TO_FIELD = {
    "nodes": "n_nodes",
    "sessions": "n_sessions",
    "beta_min": "beta_min_db",
    "beta_max": "beta_max_db",
    "beta_step": "beta_step_db",
    "alpha": "alpha",
    "poisson_mean": "poisson_mean",
    "runs": "runs",
    "seed": "seed",
    "solver": "solver",
    "delta": "delta",
    "max_iters": "max_iterations",
}


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = {}
    if args.config:
        with open(args.config) as fh:
            loaded = json.load(fh)
        known = {f.name for f in dataclasses.fields(ExperimentConfig)}
        unknown = sorted(set(loaded) - known)
        if unknown:
            raise ValueError(f"{args.config}: unknown config keys {unknown}")
        values.update(loaded)
    for flag, field_name in _FLAG_TO_FIELD.items():
        flag_value = getattr(args, flag)
        if flag_value is not None:
            values[field_name] = flag_value
    if args.modes is not None:
        values["modes"] = tuple(m.strip() for m in args.modes.split(",") if m.strip())
    if "modes" in values:
        values["modes"] = tuple(values["modes"])
    return ExperimentConfig(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        fixture = load_fixture(args.fixture) if args.fixture else None
        table, records = run_sweep(cfg, fixture)
        write_results(table, args.out)
        if args.detail:
            write_detail(records, args.detail)
    except Exception as exc:
        print(f"softsched: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
