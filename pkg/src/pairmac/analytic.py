"""Closed-form access-probability and delay model, plus trace estimation.

For a pair contending under the grant protocol, a cycle succeeds when both
control frames decode (probability p_s each) and, if anyone else is contending
(probability p_c), this pair holds the top priority (probability p_top):

    P = (1 - p_c) * p_s**2 + p_c * p_top * p_s**2

Attempts to first access are then geometric on {1, 2, ...} with parameter P,
and the mean access delay beyond the winning cycle is (1/P - 1) * T_s where
T_s is the slot duration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class InsufficientData(ValueError):
    """Raised when a trace is too short to estimate contention parameters."""


def _check_prob(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must be a probability in [0, 1], got {p}")


def access_probability(p_c: float, p_s: float, p_top: float) -> float:
    """Per-cycle probability that the pair wins medium access."""
    _check_prob("p_c", p_c)
    _check_prob("p_s", p_s)
    _check_prob("p_top", p_top)
    ps2 = p_s * p_s
    return (1.0 - p_c) * ps2 + p_c * p_top * ps2


def first_access_pmf(p: float, max_attempts: int) -> list[float]:
    """P(first success on attempt j), j = 1..max_attempts."""
    _check_prob("p", p)
    q = 1.0 - p
    return [q ** (j - 1) * p for j in range(1, max_attempts + 1)]


def mean_access_delay_us(p: float, slot_us: float = 20.0) -> float:
    """Expected wait before the winning attempt, (1/p - 1) * slot."""
    _check_prob("p", p)
    if p == 0.0:
        return float("inf")
    return (1.0 / p - 1.0) * slot_us


def sample_first_access(p: float, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Draw attempt counts (support 1, 2, ...) for `trials` independent pairs.

    Inverse-CDF sampling: N = ceil(ln(U) / ln(1-p)) reproduces the geometric
    law exactly in one vectorized pass.
    """
    _check_prob("p", p)
    if p <= 0.0:
        raise ValueError("p must be positive to sample")
    if p >= 1.0:
        return np.ones(trials, dtype=np.int64)
    u = rng.random(trials)
    draws = np.ceil(np.log(u) / math.log(1.0 - p)).astype(np.int64)
    return np.maximum(draws, 1)


def ks_distance_geometric(samples: np.ndarray, p: float) -> float:
    """sup_j |empirical CDF - geometric CDF| over the observed support."""
    _check_prob("p", p)
    samples = np.asarray(samples)
    n = len(samples)
    if n == 0:
        raise ValueError("no samples")
    hi = int(samples.max())
    counts = np.bincount(samples, minlength=hi + 1)[1:]  # index j-1 = attempts j
    ecdf = np.cumsum(counts) / n
    js = np.arange(1, hi + 1)
    cdf = 1.0 - (1.0 - p) ** js
    return float(np.max(np.abs(ecdf - cdf)))


@dataclass
class ContentionEstimate:
    p_c: float                 # fraction of cycles with >= 2 requesters
    p_s: float                 # decode success rate over all decode trials
    p_top: list[float]         # per pair: P(top priority | >= 2 requesters)
    cycles: int

    def access_probability(self, pair: int) -> float:
        return access_probability(self.p_c, self.p_s, self.p_top[pair])


MIN_CYCLES = 1000


def estimate_params(cycles, num_pairs: int, higher_wins: bool = True) -> ContentionEstimate:
    """Estimate (p_c, p_s, p_top) from contention-cycle records.

    Accepts any iterable of records with `requesters`, `values`,
    `decode_trials`, `decode_failures` attributes (the trace records produced
    by the grant engine qualify).  `higher_wins` selects the priority
    convention: True for queue-length values, False for static ranks where 1
    is the highest.
    """
    total = 0
    contended = 0
    trials = 0
    failures = 0
    top_counts = [0] * num_pairs
    for rec in cycles:
        total += 1
        trials += rec.decode_trials
        failures += rec.decode_failures
        req = rec.requesters
        if len(req) >= 2:
            contended += 1
            if higher_wins:
                best = min(zip(rec.values, req), key=lambda vp: (-vp[0], vp[1]))
            else:
                best = min(zip(rec.values, req), key=lambda vp: (vp[0], vp[1]))
            top_counts[best[1]] += 1
    if total < MIN_CYCLES:
        raise InsufficientData(
            f"need at least {MIN_CYCLES} contention cycles, got {total}"
        )
    p_c = contended / total
    p_s = 1.0 - (failures / trials) if trials > 0 else 1.0
    p_top = [
        (top_counts[i] / contended) if contended > 0 else 0.0
        for i in range(num_pairs)
    ]
    return ContentionEstimate(p_c=p_c, p_s=p_s, p_top=p_top, cycles=total)
