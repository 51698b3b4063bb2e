"""Pure-Python weighbridge backend, built on the event engine.

Mirrors the compiled kernel operation for operation: both consume the same
random streams in the same order (all per-customer draws happen at arrival),
so they produce bit-identical tallies for the same seed derivation.
"""

from __future__ import annotations

import math
from collections import deque

from ..engine import RandomStream, Simulator
from .model import CustomerRecord, ReplicationTally, dissatisfaction

LORRY, NON_LORRY = 0, 1
_TYPE_NAMES = ("lorry", "non-lorry")


def _draw_delay(kind: int, a: float, b: float, stream: RandomStream) -> float:
    if kind == 0:
        return a
    if kind == 1:
        return a + (b - a) * stream.generator.random()
    if kind == 2:
        x = stream.generator.normal(a, b)
        while x <= 0.0:
            x = stream.generator.normal(a, b)
        return x
    return a * stream.generator.standard_exponential()


def run_replication(params: dict, streams: dict, collect_customers: bool = False):
    """Simulate one replication; returns (ReplicationTally, records or None)."""
    p = params
    rate = p["rate_per_sec"]
    lanes = (p["lorry_lanes"], p["non_lorry_lanes"])
    qcap = (p["lorry_qcap"], p["non_lorry_qcap"])
    qcap_total = qcap[0] + qcap[1]
    advance = p["advance_free"]
    merge_cap = p["merge_capacity"]
    svc_mean = (p["lorry_mean"], p["non_lorry_mean"])
    svc_sd = (p["lorry_sd"], p["non_lorry_sd"])
    svc_streams = (streams["service_lorry"], streams["service_non_lorry"])
    end = p["end_time"]
    warm = p["warmup_time"]
    total_gate = p["total_gate"]
    poisson = p["poisson_arrivals"]
    bernoulli = p["bernoulli_mix"]

    sim = Simulator()
    busy = [0, 0]
    waiting = [deque(), deque()]   # lane-group marshalling queues of service times
    channels = [deque(), deque()]  # approach-road waiting channels: (join_seq, svc)
    merge_used = 0
    merge_wait = deque()
    quota_err = 0.0
    join_seq = 0

    n = n_queued = n_passive = dissat_sum = 0
    peak_backlog = 0
    leftover = 0
    arrivals_total = 0
    decisions_done = 0
    arrivals_finished = False
    records: list[CustomerRecord] | None = [] if collect_customers else None

    def gate_open(g: int) -> bool:
        if total_gate:
            return len(waiting[0]) + len(waiting[1]) <= qcap_total - advance
        return len(waiting[g]) <= qcap[g] - advance

    def group_closed(g: int) -> bool:
        # per-group saturation, used for blame attribution in either gate mode
        return len(waiting[g]) > qcap[g] - advance

    def enter_lanes(g: int, svc: float, now: float) -> None:
        if busy[g] < lanes[g]:
            busy[g] += 1
            sim.schedule(now + svc, "service_end", g)
        else:
            waiting[g].append(svc)

    def pull_waiting(g: int, now: float) -> None:
        if waiting[g]:
            svc = waiting[g].popleft()
            busy[g] += 1
            sim.schedule(now + svc, "service_end", g)

    def release(now: float) -> None:
        if total_gate:
            while (channels[0] or channels[1]) and gate_open(0):
                if channels[0] and channels[1]:
                    g = 0 if channels[0][0][0] < channels[1][0][0] else 1
                else:
                    g = 0 if channels[0] else 1
                _, svc = channels[g].popleft()
                enter_lanes(g, svc, now)
            return
        for g in (LORRY, NON_LORRY):
            while channels[g] and gate_open(g):
                _, svc = channels[g].popleft()
                enter_lanes(g, svc, now)

    def enter_merge(g: int, now: float) -> None:
        nonlocal merge_used
        merge_used += 1
        busy[g] -= 1
        delay = _draw_delay(p["merge_kind"], p["merge_a"], p["merge_b"], streams["merge"])
        sim.schedule(now + delay, "merge_done", None)
        pull_waiting(g, now)
        release(now)

    def on_arrival(t: float, _subject) -> None:
        nonlocal quota_err, arrivals_total, arrivals_finished
        arrivals_total += 1
        hour_sec = t % 86400.0
        in_peak = p["peak_start_sec"] <= hour_sec < p["peak_end_sec"]
        share = p["peak_p"] if in_peak else p["off_peak_p"]
        if bernoulli:
            g = LORRY if streams["vehicle_type"].generator.random() < share else NON_LORRY
        else:
            quota_err += share
            if quota_err >= 1.0:
                g = LORRY
                quota_err -= 1.0
            else:
                g = NON_LORRY
        temper = streams["temperament"].generator.random() < p["bad_temper_p"]
        alone = streams["company"].generator.random() < p["alone_p"]
        svc = svc_streams[g].generator.normal(svc_mean[g], svc_sd[g])
        while svc <= 0.0:
            svc = svc_streams[g].generator.normal(svc_mean[g], svc_sd[g])
        travel = _draw_delay(p["travel_kind"], p["travel_a"], p["travel_b"], streams["travel"])
        sim.schedule(t + travel, "decision", (g, svc, t, temper, alone, arrivals_total - 1))
        if poisson:
            nxt = t + streams["arrival"].generator.standard_exponential() / rate
        else:
            nxt = t + 1.0 / rate
        if nxt <= end:
            sim.schedule(nxt, "arrival", None)
        else:
            arrivals_finished = True

    def on_decision(t: float, subject) -> None:
        nonlocal n, n_queued, n_passive, dissat_sum, join_seq
        nonlocal decisions_done, peak_backlog, leftover
        g, svc, arrival_time, temper, alone, customer_id = subject
        counted = arrival_time >= warm
        jam = bool(channels[0]) or bool(channels[1])
        own_open = gate_open(g)
        if jam or not own_open:
            queue_kind = 2 if (group_closed(1 - g) and not group_closed(g)) else 1
            channels[g].append((join_seq, svc))
            join_seq += 1
            backlog = len(channels[0]) + len(channels[1])
            if backlog > peak_backlog:
                peak_backlog = backlog
        else:
            queue_kind = 0
            enter_lanes(g, svc, t)
        if counted:
            n += 1
            if queue_kind:
                n_queued += 1
                if queue_kind == 2:
                    n_passive += 1
            dissat_sum += dissatisfaction(temper, alone, queue_kind)
            if records is not None:
                records.append(
                    CustomerRecord(
                        id=customer_id,
                        vehicle_type=_TYPE_NAMES[g],
                        arrival_time=arrival_time,
                        bad_temper=temper,
                        alone=alone,
                        queued=queue_kind > 0,
                        passive_queued=queue_kind == 2,
                        dissatisfaction=dissatisfaction(temper, alone, queue_kind),
                    )
                )
        decisions_done += 1
        if arrivals_finished and decisions_done == arrivals_total:
            leftover = len(channels[0]) + len(channels[1])
            sim.request_stop()

    def on_service_end(t: float, g) -> None:
        if merge_used < merge_cap:
            enter_merge(g, t)
        else:
            merge_wait.append(g)

    def on_merge_done(t: float, _subject) -> None:
        nonlocal merge_used
        merge_used -= 1
        if merge_wait:
            enter_merge(merge_wait.popleft(), t)

    sim.on("arrival", on_arrival)
    sim.on("decision", on_decision)
    sim.on("service_end", on_service_end)
    sim.on("merge_done", on_merge_done)

    if poisson:
        first = streams["arrival"].generator.standard_exponential() / rate
    else:
        first = 1.0 / rate
    if first <= end:
        sim.schedule(first, "arrival", None)
    else:
        arrivals_finished = True
    sim.run(math.inf)

    tally = ReplicationTally(
        customers=n,
        queued=n_queued,
        passive=n_passive,
        dissat_sum=dissat_sum,
        peak_backlog=peak_backlog,
        leftover=leftover,
    )
    return tally, records
