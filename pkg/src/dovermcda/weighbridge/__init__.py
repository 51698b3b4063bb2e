"""Dover weighbridge traffic simulation.

Two interchangeable backends implement the same model: a compiled kernel
(built from ``_kernel.pyx``) and a pure-Python fallback on the event engine.
The compiled one is selected at import when available; set the environment
variable ``DOVERMCDA_BACKEND=pure`` (or ``kernel``) to force a choice. Both
consume identical random streams, so results do not depend on the backend.

Statistics are per-customer frequencies: the share of customers that met the
pre-weighbridge queue at all, the share that met it passively (held up by the
other vehicle type), and mean dissatisfaction. Replications are independently
seeded; scenario expectations pair replications across scenarios and options
(common random numbers) before averaging.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..engine import spawn_streams
from ..scenarios import Scenario, ScenarioSet
from . import _pure
from .model import (
    STREAM_PURPOSES,
    ConfigurationError,
    CustomerRecord,
    DelaySpec,
    ReplicationTally,
    SimConfig,
    SimStats,
    dissatisfaction,
    kernel_params,
    temporal_ltp,
)

__all__ = [
    "ConfigurationError",
    "CustomerRecord",
    "DelaySpec",
    "SimConfig",
    "SimStats",
    "dissatisfaction",
    "temporal_ltp",
    "simulate_once",
    "simulate_once_with_customers",
    "simulate_replicated",
    "expected_stats",
    "expected_stats_from_table",
    "simulation_table",
    "SimulationTable",
    "active_backend",
    "available_backends",
]

try:
    from . import _kernel
except ImportError:  # compiled kernel not built
    _kernel = None

_FORCED = os.environ.get("DOVERMCDA_BACKEND", "").strip().lower()


def available_backends() -> tuple[str, ...]:
    return ("kernel", "pure") if _kernel is not None else ("pure",)


def active_backend() -> str:
    if _FORCED == "pure":
        return "pure"
    if _FORCED == "kernel":
        if _kernel is None:
            raise ConfigurationError("compiled kernel requested but not built")
        return "kernel"
    return "kernel" if _kernel is not None else "pure"


def _replication_streams(seed: int, scenario_id: int, replication: int):
    # no option id in the key: options share traffic across replications
    return spawn_streams(seed, (scenario_id, replication), STREAM_PURPOSES)


def _run_tally(params: dict, seed: int, scenario_id: int, replication: int,
               backend: str) -> ReplicationTally:
    streams = _replication_streams(seed, scenario_id, replication)
    if backend == "kernel":
        raw = _kernel.run_replication(
            params, {k: s.bit_generator for k, s in streams.items()}
        )
        return ReplicationTally(*raw)
    tally, _ = _pure.run_replication(params, streams)
    return tally


def _stats_from_tallies(tallies, rate_per_sec: float) -> SimStats:
    qs = np.array([t.queue_pct() for t in tallies])
    ps = np.array([t.passive_pct() for t in tallies])
    ds = np.array([t.dissat_pct() for t in tallies])
    r = len(tallies)
    sd = (lambda a: float(np.std(a, ddof=1))) if r > 1 else (lambda a: 0.0)
    unstable = any(t.leftover > rate_per_sec * 3600.0 for t in tallies)
    return SimStats(
        queue_pct=float(np.mean(qs)),
        passive_pct=float(np.mean(ps)),
        dissat_pct=float(np.mean(ds)),
        queue_sd=sd(qs),
        passive_sd=sd(ps),
        dissat_sd=sd(ds),
        customers=int(sum(t.customers for t in tallies)),
        replications=r,
        unstable=unstable,
    )


def simulate_once(option, scenario: Scenario, config: SimConfig, seed: int,
                  backend: str | None = None) -> SimStats:
    """One replication of one (option, scenario) cell."""
    backend = backend or active_backend()
    params = kernel_params(option, scenario, config)
    tally = _run_tally(params, seed, scenario.id, 0, backend)
    return _stats_from_tallies([tally], params["rate_per_sec"])


def simulate_once_with_customers(option, scenario: Scenario, config: SimConfig,
                                 seed: int):
    """Like simulate_once but also returns per-customer records (pure backend)."""
    params = kernel_params(option, scenario, config)
    streams = _replication_streams(seed, scenario.id, 0)
    tally, records = _pure.run_replication(params, streams, collect_customers=True)
    return _stats_from_tallies([tally], params["rate_per_sec"]), records


def simulate_replicated(option, scenario: Scenario, config: SimConfig,
                        master_seed: int, backend: str | None = None) -> SimStats:
    """Replication mean and standard deviation for one cell.

    Replication ``r`` always draws from streams keyed by (scenario, r), so the
    result is independent of execution order and identical across backends.
    """
    backend = backend or active_backend()
    params = kernel_params(option, scenario, config)
    tallies = [
        _run_tally(params, master_seed, scenario.id, r, backend)
        for r in range(config.replications)
    ]
    return _stats_from_tallies(tallies, params["rate_per_sec"])


@dataclass(frozen=True)
class SimulationTable:
    """Per-scenario statistics for a set of options plus expected rows."""

    cells: dict  # (option_id, scenario_id) -> SimStats
    expected: dict  # option_id -> SimStats


def _expected_from_cells(option_ids, scenario_set: ScenarioSet,
                         per_rep: dict) -> dict:
    """Combine per-replication cell tallies into expected-overall statistics.

    For each replication index the scenario expectation is computed first
    (pairing the same replication across scenarios), then mean/sd are taken
    across replications.
    """
    out = {}
    for oid in option_ids:
        reps = len(next(iter(per_rep.values())))
        e_q, e_p, e_d = [], [], []
        customers = 0
        unstable = False
        for r in range(reps):
            q = p = d = 0.0
            for s in scenario_set:
                tally = per_rep[(oid, s.id)][r]
                q += s.probability * tally.queue_pct()
                p += s.probability * tally.passive_pct()
                d += s.probability * tally.dissat_pct()
                customers += tally.customers
                unstable = unstable or tally.leftover > 0
            e_q.append(q)
            e_p.append(p)
            e_d.append(d)
        sd = (lambda a: float(np.std(a, ddof=1))) if reps > 1 else (lambda a: 0.0)
        out[oid] = SimStats(
            queue_pct=float(np.mean(e_q)),
            passive_pct=float(np.mean(e_p)),
            dissat_pct=float(np.mean(e_d)),
            queue_sd=sd(np.array(e_q)),
            passive_sd=sd(np.array(e_p)),
            dissat_sd=sd(np.array(e_d)),
            customers=customers,
            replications=reps,
            unstable=unstable,
        )
    return out


def simulation_table(options, scenario_set: ScenarioSet, config: SimConfig,
                     master_seed: int, backend: str | None = None) -> SimulationTable:
    """Simulate every (option, scenario) cell and the expected-overall rows."""
    backend = backend or active_backend()
    per_rep = {}
    cells = {}
    for option in options:
        for s in scenario_set:
            params = kernel_params(option, s, config)
            tallies = [
                _run_tally(params, master_seed, s.id, r, backend)
                for r in range(config.replications)
            ]
            per_rep[(option.id, s.id)] = tallies
            cells[(option.id, s.id)] = _stats_from_tallies(tallies, params["rate_per_sec"])
    expected = _expected_from_cells([o.id for o in options], scenario_set, per_rep)
    return SimulationTable(cells=cells, expected=expected)


def expected_stats(option, scenario_set: ScenarioSet, config: SimConfig,
                   master_seed: int, backend: str | None = None) -> SimStats:
    """Probability-weighted scenario expectation of the replicated statistics."""
    table = simulation_table([option], scenario_set, config, master_seed, backend)
    return table.expected[option.id]


def expected_stats_from_table(values: dict, scenario_set: ScenarioSet) -> SimStats:
    """Expected statistics from an externally supplied per-scenario table.

    ``values`` maps scenario id to SimStats; used when published statistics
    are injected instead of simulating.
    """
    q = p = d = 0.0
    customers = 0
    for s in scenario_set:
        if s.id not in values:
            raise ConfigurationError(f"simulation table: missing scenario id {s.id}")
        st = values[s.id]
        q += s.probability * st.queue_pct
        p += s.probability * st.passive_pct
        d += s.probability * st.dissat_pct
        customers += st.customers
    return SimStats(queue_pct=q, passive_pct=p, dissat_pct=d, customers=customers)
