"""Command line interface.

    pairmac run scenario.scn [--seed N] [--set key=value ...] [--out DIR]
    pairmac sweep sweep.swp [--out DIR]
    pairmac compare scenario.scn [--seeds 1,2,...] [--out DIR]
    pairmac analyze scenario.scn [--set ...]
    pairmac plot summary.csv --kind delay_vs_lambda --out chart.svg

Exit codes: 0 success, 2 configuration error (bad file/keys/values),
3 I/O error (missing inputs, unwritable outputs).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import experiments
from .analytic import InsufficientData, estimate_params, mean_access_delay_us
from .metrics import aggregate, write_results_csv
from .plotting import PLOT_KINDS, plot_summary
from .scenario import ParseError, apply_overrides, load_scenario, load_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_scenario(path: str, seed: int | None, overrides: list[str]):
    if not os.path.exists(path):
        raise CliError(f"scenario file not found: {path}", EXIT_IO)
    try:
        scn = load_scenario(path)
        if overrides:
            scn = apply_overrides(scn, overrides)
        if seed is not None:
            scn.seed = seed
        scn.validate()
    except ParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_CONFIG) from exc
    return scn


def _outdir(path: str) -> str:
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create output directory {path}: {exc}", EXIT_IO) from exc
    return path


def _cmd_run(args) -> int:
    scn = _load_scenario(args.scenario, args.seed, args.set or [])
    out = _outdir(args.out)
    res = experiments.run_scenario(scn)
    agg = aggregate(res)
    write_results_csv(os.path.join(out, "results.csv"),
                      [experiments.result_row(scn, agg)])
    print(f"{scn.scenario_id}: protocol={scn.protocol} pairs={scn.num_pairs} "
          f"eff={agg.efficiency:.4f} delay={agg.mean_delay_us:.1f}us "
          f"served={agg.served}")
    print(f"wrote {os.path.join(out, 'results.csv')}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if not os.path.exists(args.sweep):
        raise CliError(f"sweep file not found: {args.sweep}", EXIT_IO)
    try:
        spec = load_sweep(args.sweep)
        if args.set:
            spec.base = apply_overrides(spec.base, args.set)
    except ParseError as exc:
        raise CliError(f"{args.sweep}: {exc}", EXIT_CONFIG) from exc
    out = _outdir(args.out)
    rows, summary = experiments.run_sweep(spec)
    write_results_csv(os.path.join(out, "results.csv"), rows)
    experiments.write_summary_csv(os.path.join(out, "summary.csv"), summary)
    print(f"swept {len(summary)} points x {len(spec.seeds)} seeds "
          f"({len(rows)} runs)")
    print(f"wrote {os.path.join(out, 'results.csv')}")
    print(f"wrote {os.path.join(out, 'summary.csv')}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    scn = _load_scenario(args.scenario, None, args.set or [])
    try:
        seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else [scn.seed]
    except ValueError:
        raise CliError(f"bad --seeds list: {args.seeds!r}", EXIT_CONFIG) from None
    out = _outdir(args.out)
    rows = experiments.run_comparison(scn, seeds)
    experiments.write_comparison_csv(os.path.join(out, "comparison.csv"), rows)
    for row in rows:
        print(f"{row['metric']}: gsdma={row['gsdma']} csmaca={row['csmaca']} "
              f"ratio={row['ratio_gsdma_over_csmaca']}")
    print(f"wrote {os.path.join(out, 'comparison.csv')}")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    scn = _load_scenario(args.scenario, args.seed, args.set or [])
    if scn.protocol != "gsdma":
        raise CliError("analyze requires protocol = gsdma", EXIT_CONFIG)
    res = experiments.run_scenario(scn, trace=True)
    agg = aggregate(res)
    higher_wins = scn.priority_scheme == "queue_length"
    try:
        est = estimate_params(res.trace, scn.num_pairs, higher_wins=higher_wins)
    except InsufficientData as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc
    print(f"cycles={est.cycles} p_c={est.p_c:.4f} p_s={est.p_s:.4f}")
    for i in range(scn.num_pairs):
        p_i = est.access_probability(i)
        pred = mean_access_delay_us(p_i, scn.slot_us) if p_i > 0 else float("inf")
        st = agg.pairs[i]
        print(f"pair {i}: p_top={est.p_top[i]:.4f} P={p_i:.4f} "
              f"predicted_delay={pred:.1f}us simulated_delay={st.mean_delay_us:.1f}us "
              f"served={st.served}")
    return EXIT_OK


def _cmd_plot(args) -> int:
    if not os.path.exists(args.summary):
        raise CliError(f"summary file not found: {args.summary}", EXIT_IO)
    with open(args.summary, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise CliError(f"{args.summary}: no data rows", EXIT_CONFIG)
    needed = {"efficiency_mean", "mean_access_delay_us_mean"}
    if not needed.issubset(rows[0].keys()):
        raise CliError(f"{args.summary}: not a summary.csv", EXIT_CONFIG)
    try:
        plot_summary(rows, args.kind, args.out)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from exc
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairmac",
        description="Slotted-time simulator for pairwise-link MAC protocols",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario, write results.csv")
    p_run.add_argument("scenario")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_run.add_argument("--out", default=".")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a sweep file, write results + summary")
    p_sweep.add_argument("sweep")
    p_sweep.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_sweep.add_argument("--out", default=".")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cmp = sub.add_parser("compare", help="run both protocols on one scenario")
    p_cmp.add_argument("scenario")
    p_cmp.add_argument("--seeds", default="", help="comma-separated seed list")
    p_cmp.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_cmp.add_argument("--out", default=".")
    p_cmp.set_defaults(func=_cmd_compare)

    p_an = sub.add_parser("analyze", help="estimate contention parameters from a traced run")
    p_an.add_argument("scenario")
    p_an.add_argument("--seed", type=int, default=None)
    p_an.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_an.set_defaults(func=_cmd_analyze)

    p_plot = sub.add_parser("plot", help="chart a summary.csv as SVG")
    p_plot.add_argument("summary")
    p_plot.add_argument("--kind", required=True, choices=PLOT_KINDS)
    p_plot.add_argument("--out", required=True)
    p_plot.set_defaults(func=_cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
