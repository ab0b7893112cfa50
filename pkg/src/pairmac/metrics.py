"""Per-pair and aggregate metrics, plus the results.csv row format.

Accounting convention shared by both engines, per pair:
  n = slots of successfully delivered payload
  k = slots spent waiting in an orderly way (deferrals, inter-frame spaces,
      backoff countdown, ACK wait)
  m = slots wasted on failed contention (re-contention overhead, collided or
      undelivered payload)
Efficiency is n / (n + k + m).  Idle slots with nothing to send belong to no
bucket.  Access delay is measured in slots from the moment a packet reaches
the head of its queue (or its arrival, with delay_from = arrival) until its
payload transmission begins, reported in microseconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class CycleRecord:
    """One contention cycle of the grant protocol (trace mode)."""

    slot: int
    requesters: list[int]
    values: list[int]          # raw priority values, aligned with requesters
    granters: list[int]        # pairs whose receiver issued a grant
    transmitters: list[int]    # pairs that sent payload this cycle
    delivered: list[int]       # subset of transmitters that got through
    decode_trials: int = 0
    decode_failures: int = 0


@dataclass
class RunResult:
    protocol: str
    num_pairs: int
    sim_slots: int
    slot_us: float
    n: list[int]
    k: list[int]
    m: list[int]
    delays: list[list[int]]    # per pair, in slots
    dropped: list[int]
    trace: list[CycleRecord] | None = None

    @property
    def served(self) -> list[int]:
        return [len(d) for d in self.delays]


@dataclass
class PairStats:
    pair: int
    n: int
    k: int
    m: int
    efficiency: float
    served: int
    mean_delay_us: float


@dataclass
class Aggregate:
    efficiency: float          # mean of active pairs' efficiencies
    mean_delay_us: float       # mean of pairs' mean delays
    delay_ci95_us: float       # pooled normal approximation over packets
    n: int
    k: int
    m: int
    served: int
    pairs: list[PairStats] = field(default_factory=list)


def pair_stats(res: RunResult, i: int) -> PairStats:
    n, k, m = res.n[i], res.k[i], res.m[i]
    denom = n + k + m
    eff = (n / denom) if denom > 0 else 0.0
    ds = res.delays[i]
    mean_us = (sum(ds) / len(ds)) * res.slot_us if ds else float("nan")
    return PairStats(pair=i, n=n, k=k, m=m, efficiency=eff,
                     served=len(ds), mean_delay_us=mean_us)


def aggregate(res: RunResult) -> Aggregate:
    pairs = [pair_stats(res, i) for i in range(res.num_pairs)]
    active = [p for p in pairs if (p.n + p.k + p.m) > 0]
    eff = sum(p.efficiency for p in active) / len(active) if active else 0.0
    with_delay = [p for p in pairs if p.served > 0]
    if with_delay:
        delay = sum(p.mean_delay_us for p in with_delay) / len(with_delay)
    else:
        delay = float("nan")
    # pooled CI over all packets (normal approximation)
    all_d = [d * res.slot_us for ds in res.delays for d in ds]
    if len(all_d) >= 2:
        mu = sum(all_d) / len(all_d)
        var = sum((x - mu) ** 2 for x in all_d) / (len(all_d) - 1)
        ci = 1.96 * math.sqrt(var / len(all_d))
    else:
        ci = float("nan")
    return Aggregate(
        efficiency=eff,
        mean_delay_us=delay,
        delay_ci95_us=ci,
        n=sum(p.n for p in pairs),
        k=sum(p.k for p in pairs),
        m=sum(p.m for p in pairs),
        served=sum(p.served for p in pairs),
        pairs=pairs,
    )


# ---------------------------------------------------------------------------
# results.csv
# ---------------------------------------------------------------------------

RESULT_COLUMNS = (
    "scenario_id", "protocol", "num_pairs", "topology", "snr_db", "lambda",
    "seed", "sim_slots", "n", "k", "m", "efficiency", "packets_served",
    "mean_access_delay_us", "delay_ci95_us",
)


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def result_row(scn, agg: Aggregate) -> dict[str, str]:
    vals = {
        "scenario_id": scn.scenario_id,
        "protocol": scn.protocol,
        "num_pairs": scn.num_pairs,
        "topology": scn.topology,
        "snr_db": float(scn.snr_db),
        "lambda": float(scn.arrival_rate),
        "seed": scn.seed,
        "sim_slots": scn.sim_slots,
        "n": agg.n,
        "k": agg.k,
        "m": agg.m,
        "efficiency": float(agg.efficiency),
        "packets_served": agg.served,
        "mean_access_delay_us": float(agg.mean_delay_us),
        "delay_ci95_us": float(agg.delay_ci95_us),
    }
    return {name: _fmt(vals[name]) for name in RESULT_COLUMNS}


def write_results_csv(path: str, rows: list[dict[str, str]]) -> None:
    lines = [",".join(RESULT_COLUMNS)]
    for row in rows:
        eff = float(row["efficiency"])
        if not 0.0 <= eff <= 1.0:
            raise ValueError(f"efficiency out of range in row {row['scenario_id']!r}: {eff}")
        delay = float(row["mean_access_delay_us"])
        if delay < 0.0:  # nan (no packets) is allowed
            raise ValueError(f"negative delay in row {row['scenario_id']!r}: {delay}")
        lines.append(",".join(row[c] for c in RESULT_COLUMNS))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def mean_ci95(values: list[float]) -> tuple[float, float]:
    """Across-seed mean and 1.96 * standard error (0 width for one value)."""
    vals = [v for v in values if not math.isnan(v)]
    if not vals:
        return float("nan"), float("nan")
    mu = sum(vals) / len(vals)
    if len(vals) < 2:
        return mu, 0.0
    var = sum((x - mu) ** 2 for x in vals) / (len(vals) - 1)
    return mu, 1.96 * math.sqrt(var / len(vals))
