"""Packet arrival streams and the RNG stream layout.

Arrivals are per-slot Bernoulli per pair.  The scenario's `arrival_rate` is a
normalized offered load: the per-slot probability is

    r = arrival_rate * arrival_scale / (2 + packet_len_slots)

so arrival_rate counts (scaled) packets per contention-cycle worth of slots
rather than packets per slot — packets are 50 slots long, so a literal
packets-per-slot reading would put every workload far beyond link capacity.

Streams are derived from numpy SeedSequence so that a scenario seed expands
into one protocol stream (decode draws or backoff draws) plus one arrival
stream per pair; the arrival streams do not depend on the protocol, which
keeps protocol comparisons paired per seed.
"""

from __future__ import annotations

import numpy as np

_SPAWN_TAG = 777  # fixed tag so stream identity is part of the file format


def spawn_streams(seed: int, num_pairs: int):
    """Return (protocol_rng, [arrival_rng per pair])."""
    children = np.random.SeedSequence((seed, _SPAWN_TAG)).spawn(num_pairs + 1)
    proto = np.random.default_rng(children[0])
    arrivals = [np.random.default_rng(c) for c in children[1:]]
    return proto, arrivals


def per_slot_rate(scn) -> float:
    return scn.arrival_rate * scn.arrival_scale / (2.0 + scn.packet_len_slots)


def arrival_slots(rng: np.random.Generator, rate: float, horizon: int) -> np.ndarray:
    """Sorted slot indices of a Bernoulli(rate) arrival process over `horizon`.

    Drawn as Binomial(horizon, rate) count + uniform positions without
    replacement — the same joint law as slot-by-slot Bernoulli draws, but
    O(arrivals) instead of O(horizon).
    """
    if rate <= 0.0 or horizon <= 0:
        return np.empty(0, dtype=np.int64)
    if rate >= 1.0:
        return np.arange(horizon, dtype=np.int64)
    count = int(rng.binomial(horizon, rate))
    if count == 0:
        return np.empty(0, dtype=np.int64)
    slots = rng.choice(horizon, size=count, replace=False)
    slots.sort()
    return slots.astype(np.int64)


def make_arrivals(scn) -> list[np.ndarray]:
    """Arrival slot arrays for every pair (empty arrays when saturated)."""
    _, arrival_rngs = spawn_streams(scn.seed, scn.num_pairs)
    if scn.saturated:
        return [np.empty(0, dtype=np.int64) for _ in range(scn.num_pairs)]
    rate = per_slot_rate(scn)
    return [arrival_slots(r, rate, scn.sim_slots) for r in arrival_rngs]
