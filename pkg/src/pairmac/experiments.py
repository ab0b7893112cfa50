"""Scenario execution, sweeps, and protocol comparisons (CSV products).

Outputs:
  results.csv     one row per (sweep point, seed); fixed column order, floats
                  serialized with repr, so equal-seed reruns are byte-identical
  summary.csv     per sweep point: across-seed mean and CI95 of efficiency and
                  mean access delay
  comparison.csv  `compare` command: both protocols on the same scenario and
                  seeds, efficiency/delay ratios, and (for 2-pair scenarios)
                  the hidden-topology delay inflation per protocol
"""

from __future__ import annotations

import math

from .csmaca import run_csmaca
from .gsdma import run_gsdma
from .metrics import (
    Aggregate,
    RunResult,
    aggregate,
    mean_ci95,
    result_row,
    write_results_csv,
)
from .scenario import Scenario, SweepSpec

_ENGINES = {"gsdma": run_gsdma, "csmaca": run_csmaca}


def run_scenario(scn: Scenario, trace: bool = False) -> RunResult:
    scn.validate()
    return _ENGINES[scn.protocol](scn, trace=trace)


def run_and_aggregate(scn: Scenario) -> tuple[RunResult, Aggregate]:
    res = run_scenario(scn)
    return res, aggregate(res)


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


SUMMARY_COLUMNS = (
    "scenario_id", "protocol", "num_pairs", "topology", "snr_db", "lambda",
    "seeds", "efficiency_mean", "efficiency_ci95",
    "mean_access_delay_us_mean", "mean_access_delay_us_ci95",
)


def run_sweep(spec: SweepSpec):
    """Execute all (point, seed) runs; return (result_rows, summary_rows)."""
    rows = []
    summary = []
    for idx, base in spec.points():
        effs = []
        delays = []
        for seed in spec.seeds:
            scn = base.copy()
            scn.seed = seed
            scn.scenario_id = f"{spec.base.scenario_id}.p{idx:03d}"
            _, agg = run_and_aggregate(scn)
            rows.append(result_row(scn, agg))
            effs.append(agg.efficiency)
            delays.append(agg.mean_delay_us)
        eff_m, eff_ci = mean_ci95(effs)
        d_m, d_ci = mean_ci95(delays)
        summary.append({
            "scenario_id": f"{spec.base.scenario_id}.p{idx:03d}",
            "protocol": base.protocol,
            "num_pairs": str(base.num_pairs),
            "topology": base.topology,
            "snr_db": _fmt(float(base.snr_db)),
            "lambda": _fmt(float(base.arrival_rate)),
            "seeds": str(len(spec.seeds)),
            "efficiency_mean": _fmt(eff_m),
            "efficiency_ci95": _fmt(eff_ci),
            "mean_access_delay_us_mean": _fmt(d_m),
            "mean_access_delay_us_ci95": _fmt(d_ci),
        })
    return rows, summary


def write_summary_csv(path: str, summary_rows: list[dict[str, str]]) -> None:
    lines = [",".join(SUMMARY_COLUMNS)]
    for row in summary_rows:
        lines.append(",".join(row[c] for c in SUMMARY_COLUMNS))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


COMPARISON_COLUMNS = (
    "metric", "num_pairs", "topology", "gsdma", "csmaca", "ratio_gsdma_over_csmaca",
)


def run_comparison(scn: Scenario, seeds: list[int]):
    """Both protocols on the same scenario/seeds; returns comparison rows.

    For 2-pair scenarios on a fully connected topology, also runs the hidden
    variant and reports per-protocol delay inflation (hidden / connected).
    """
    def batch(base: Scenario, protocol: str, topology: str | None = None):
        effs, dels = [], []
        for seed in seeds:
            s = base.copy()
            s.protocol = protocol
            s.seed = seed
            if topology is not None:
                s.topology = topology
            _, agg = run_and_aggregate(s)
            effs.append(agg.efficiency)
            dels.append(agg.mean_delay_us)
        return mean_ci95(effs)[0], mean_ci95(dels)[0]

    g_eff, g_del = batch(scn, "gsdma")
    c_eff, c_del = batch(scn, "csmaca")
    rows = [
        {
            "metric": "efficiency",
            "num_pairs": str(scn.num_pairs),
            "topology": scn.topology,
            "gsdma": _fmt(g_eff),
            "csmaca": _fmt(c_eff),
            "ratio_gsdma_over_csmaca": _fmt(g_eff / c_eff if c_eff else float("nan")),
        },
        {
            "metric": "mean_access_delay_us",
            "num_pairs": str(scn.num_pairs),
            "topology": scn.topology,
            "gsdma": _fmt(g_del),
            "csmaca": _fmt(c_del),
            "ratio_gsdma_over_csmaca": _fmt(
                g_del / c_del if c_del and not math.isnan(c_del) else float("nan")
            ),
        },
    ]
    if scn.num_pairs == 2 and scn.topology == "fully_connected":
        gh_eff, gh_del = batch(scn, "gsdma", topology="hidden")
        ch_eff, ch_del = batch(scn, "csmaca", topology="hidden")
        rows.append({
            "metric": "hidden_delay_inflation",
            "num_pairs": "2",
            "topology": "hidden/fully_connected",
            "gsdma": _fmt(gh_del / g_del if g_del else float("nan")),
            "csmaca": _fmt(ch_del / c_del if c_del else float("nan")),
            "ratio_gsdma_over_csmaca": "",
        })
    return rows


def write_comparison_csv(path: str, rows: list[dict[str, str]]) -> None:
    lines = [",".join(COMPARISON_COLUMNS)]
    for row in rows:
        lines.append(",".join(row[c] for c in COMPARISON_COLUMNS))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


__all__ = [
    "run_scenario",
    "run_and_aggregate",
    "run_sweep",
    "run_comparison",
    "write_results_csv",
    "write_summary_csv",
    "write_comparison_csv",
    "SUMMARY_COLUMNS",
    "COMPARISON_COLUMNS",
]
