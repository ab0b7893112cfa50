"""Slot-stepped CSMA-CA baseline (802.11-DCF-style, protocol id: csmaca).

Per-packet access: sense the medium for DIFS slots (the countdown restarts
whenever the medium turns busy), then count down a backoff drawn uniformly
from [0, cw-1]; the countdown freezes on busy slots and resumes on idle ones.
Every access pays DIFS + backoff — there is no immediate-access shortcut, so a
saturated lone pair spends packet_len + DIFS + (cw_min-1)/2 + SIFS + ack_len
slots per packet on average.

After the payload the receiver waits SIFS and answers with an ack_len-slot ACK
iff the payload arrived without overlap from another in-range transmitter.
ACK frames are assumed robust (never collide) but occupy the medium for
carrier sensing.  A transmitter that sees no ACK doubles its window
(binary exponential backoff, capped at cw_max) and retries after sensing the
medium idle for EIFS = SIFS + ack_len + DIFS slots (the extended space that
follows an erroneous exchange); after retry_limit failed retransmissions the
packet is dropped.

Carrier sensing and interference follow the topology link table: a station
senses only transmissions from nodes in its own range, and a payload is
corrupted only by transmitters in range of its receiver — hidden transmitters
therefore collide without ever sensing each other, and exposed transmitters
serialize even though their receivers would both be clean.
"""

from __future__ import annotations

from collections import deque

from .channel import build_topology
from .metrics import RunResult
from .scenario import Scenario
from .traffic import make_arrivals, spawn_streams

# per-pair phases
_IDLE, _DIFS, _BACKOFF, _TX, _AWAIT = range(5)


def run_csmaca(scn: Scenario, topo=None, err=None, trace: bool = False) -> RunResult:
    if trace:
        raise ValueError("trace mode is only defined for the grant protocol")
    K = scn.num_pairs
    L = scn.packet_len_slots
    DIFS = scn.difs_slots
    SIFS = scn.sifs_slots
    ACK = scn.ack_slots
    CWMIN = scn.cw_min
    CWMAX = scn.cw_max
    RETRY = scn.retry_limit
    EIFS = SIFS + ACK + DIFS

    topo = topo if topo is not None else build_topology(scn)
    proto_rng, _ = spawn_streams(scn.seed, K)
    arrivals = make_arrivals(scn)
    saturated = scn.saturated
    cap = scn.queue_cap
    delay_from_arrival = scn.delay_from == "arrival"

    # who hears whom (tx node i = i, rx node i = K+i)
    tx_hears_tx = [[j for j in range(K) if j != i and topo.in_range(j, i)]
                   for i in range(K)]
    tx_hears_rx = [[j for j in range(K) if topo.in_range(K + j, i)]
                   for i in range(K)]
    interferers = [[j for j in range(K) if j != i and topo.in_range(j, K + i)]
                   for i in range(K)]

    queues: list[deque] = [deque() for _ in range(K)]
    ptr = [0] * K
    head_since = [0] * K
    phase = [_IDLE] * K
    difs = [0] * K
    bo = [0] * K
    cw = [CWMIN] * K
    retr = [0] * K
    tx_start = [-1] * K
    tx_end = [-1] * K
    collided = [False] * K
    ack_due = [-1] * K        # completion slot of a pending ACK wait, -1 = failed
    await_end = [-1] * K
    ack_tx_until = [-1] * K   # receiver of pair i transmits ACK in [tx_end+SIFS, this)

    n = [0] * K
    k_acc = [0] * K
    m_acc = [0] * K
    delays: list[list[int]] = [[] for _ in range(K)]
    dropped = [0] * K

    sim_slots = scn.sim_slots
    warm = int(sim_slots * scn.warmup_frac)
    integers = proto_rng.integers

    def busy_for(i: int, t: int) -> bool:
        for j in tx_hears_tx[i]:
            if phase[j] == _TX and tx_start[j] <= t < tx_end[j]:
                return True
        for j in tx_hears_rx[i]:
            if tx_end[j] + SIFS <= t < ack_tx_until[j]:
                return True
        return False

    def finish_packet(i: int, completion: int) -> None:
        queues[i].popleft()
        cw[i] = CWMIN
        retr[i] = 0
        phase[i] = _IDLE
        if saturated:
            if not queues[i]:
                queues[i].append(completion)
            head_since[i] = completion
        elif queues[i]:
            head_since[i] = max(completion, queues[i][0])

    t = 0
    while t < sim_slots:
        # ingest arrivals
        if saturated:
            for i in range(K):
                if not queues[i]:
                    queues[i].append(t)
                    head_since[i] = t
        else:
            for i in range(K):
                arr = arrivals[i]
                p = ptr[i]
                while p < len(arr) and arr[p] <= t:
                    slot = int(arr[p])
                    if cap == 0 or len(queues[i]) < cap:
                        if not queues[i]:
                            head_since[i] = slot
                        queues[i].append(slot)
                    else:
                        dropped[i] += 1
                    p += 1
                ptr[i] = p
            # fast-forward through network-wide silence
            if all(phase[i] == _IDLE and not queues[i] for i in range(K)):
                nxt = sim_slots
                for i in range(K):
                    if ptr[i] < len(arrivals[i]):
                        nxt = min(nxt, int(arrivals[i][ptr[i]]))
                if nxt <= t:
                    break
                t = nxt
                continue

        counted = t >= warm

        # resolve transmissions ending now, before anyone senses this slot
        for i in range(K):
            if phase[i] == _TX and t >= tx_end[i]:
                phase[i] = _AWAIT
                await_end[i] = tx_end[i] + SIFS + ACK
                if collided[i]:
                    ack_due[i] = -1
                else:
                    ack_due[i] = await_end[i]
                    ack_tx_until[i] = await_end[i]

        # ACK outcomes
        for i in range(K):
            if phase[i] == _AWAIT and t >= await_end[i]:
                if counted:
                    k_acc[i] += SIFS + ACK
                if ack_due[i] >= 0:
                    if counted:
                        n[i] += L
                        origin = queues[i][0] if delay_from_arrival else head_since[i]
                        delays[i].append(tx_start[i] - origin)
                    finish_packet(i, t)
                else:
                    if counted:
                        m_acc[i] += L
                    retr[i] += 1
                    if retr[i] > RETRY:
                        dropped[i] += 1
                        finish_packet(i, t)
                    else:
                        cw[i] = min(2 * cw[i], CWMAX)
                        phase[i] = _DIFS
                        difs[i] = EIFS  # erroneous exchange: extended space
                        bo[i] = int(integers(0, cw[i]))

        # who occupies the medium this slot
        txnow = [i for i in range(K) if phase[i] == _TX and tx_start[i] <= t < tx_end[i]]

        # contention state machines
        for i in range(K):
            ph = phase[i]
            if ph == _TX or ph == _AWAIT:
                continue
            if not queues[i]:
                continue
            if ph == _IDLE:
                phase[i] = _DIFS
                difs[i] = DIFS
                bo[i] = int(integers(0, cw[i]))
                ph = _DIFS
            busy = busy_for(i, t)
            if ph == _DIFS:
                if busy:
                    difs[i] = DIFS
                    if counted:
                        k_acc[i] += 1
                    continue
                difs[i] -= 1
                if counted:
                    k_acc[i] += 1
                if difs[i] == 0:
                    phase[i] = _BACKOFF
                continue
            # _BACKOFF
            if busy:
                if counted:
                    k_acc[i] += 1
                continue
            if bo[i] > 0:
                bo[i] -= 1
                if counted:
                    k_acc[i] += 1
                continue
            phase[i] = _TX
            tx_start[i] = t
            tx_end[i] = t + L
            collided[i] = False
            txnow.append(i)

        # collision marking: any same-slot overlap at a pair's receiver
        if len(txnow) > 1:
            txset = set(txnow)
            for i in txnow:
                if not collided[i] and any(j in txset for j in interferers[i]):
                    collided[i] = True

        t += 1

    return RunResult(
        protocol="csmaca",
        num_pairs=K,
        sim_slots=sim_slots,
        slot_us=scn.slot_us,
        n=n,
        k=k_acc,
        m=m_acc,
        delays=delays,
        dropped=dropped,
        trace=None,
    )
