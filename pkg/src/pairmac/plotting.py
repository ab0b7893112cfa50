"""SVG charts from sweep summary rows (matplotlib, headless backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


PLOT_KINDS = (
    "eff_vs_pairs",      # efficiency vs num_pairs, one line per lambda
    "eff_vs_snr",        # efficiency vs snr, one line per num_pairs
    "delay_vs_lambda",   # delay vs lambda, one line per num_pairs
    "delay_vs_snr",      # delay vs snr, one line per num_pairs
    "compare_eff",       # efficiency vs num_pairs, one line per protocol
    "compare_delay",     # delay vs lambda, one line per protocol
)

_AXES = {
    "eff_vs_pairs": ("num_pairs", "lambda", "efficiency_mean", "efficiency_ci95",
                     "number of pairs", "efficiency", "λ = {}"),
    "eff_vs_snr": ("snr_db", "num_pairs", "efficiency_mean", "efficiency_ci95",
                   "SNR (dB)", "efficiency", "{} pairs"),
    "delay_vs_lambda": ("lambda", "num_pairs", "mean_access_delay_us_mean",
                        "mean_access_delay_us_ci95", "arrival rate λ",
                        "mean access delay (µs)", "{} pairs"),
    "delay_vs_snr": ("snr_db", "num_pairs", "mean_access_delay_us_mean",
                     "mean_access_delay_us_ci95", "SNR (dB)",
                     "mean access delay (µs)", "{} pairs"),
    "compare_eff": ("num_pairs", "protocol", "efficiency_mean", "efficiency_ci95",
                    "number of pairs", "efficiency", "{}"),
    "compare_delay": ("lambda", "protocol", "mean_access_delay_us_mean",
                      "mean_access_delay_us_ci95", "arrival rate λ",
                      "mean access delay (µs)", "{}"),
}


def _num(x: str) -> float:
    try:
        return float(x)
    except ValueError:
        return float("nan")


def plot_summary(summary_rows: list[dict[str, str]], kind: str, out_path: str) -> None:
    if kind not in _AXES:
        raise ValueError(f"unknown plot kind {kind!r}; choose from {PLOT_KINDS}")
    xcol, series_col, ycol, cicol, xlabel, ylabel, legend_fmt = _AXES[kind]

    series: dict[str, list[tuple[float, float, float]]] = {}
    for row in summary_rows:
        key = row[series_col]
        series.setdefault(key, []).append(
            (_num(row[xcol]), _num(row[ycol]), _num(row[cicol]))
        )

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for key in sorted(series, key=lambda s: (_num(s), s)):
        pts = sorted(series[key])
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        cis = [p[2] for p in pts]
        ax.errorbar(xs, ys, yerr=cis, marker="o", capsize=3,
                    label=legend_fmt.format(key))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, format="svg")
    plt.close(fig)
