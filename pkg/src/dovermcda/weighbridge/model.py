"""Model definitions shared by the weighbridge simulation backends.

The simulated segment covers three parts of the port: the approach before
the weighbridge, the weighbridge point itself, and the merge back into a
single road afterwards.

* Vehicles enter at a constant rate (evenly spaced by default, Poisson as an
  option) and are lorries with a share given by the time-of-day lorry
  percentage: a fixed peak share in the afternoon window and a compensating
  off-peak share so the daily average matches the scenario. The default mix
  mode spreads lorries evenly through time at that share (a quota counter);
  an i.i.d. Bernoulli mix is available.
* The weighbridge point has one weigher per lane (5 lorry + 2 non-lorry in
  the base layout; options add one lane to one group) and a short marshalling
  queue per lane group sized proportionally to its lane count. A vehicle may
  advance past the pre-weighbridge point only while its group's marshalling
  queue keeps at least ``advance_free_capacity`` slots free; otherwise it
  waits on the approach road, which has unlimited room.
* The approach road's two lanes act as type-sorted waiting channels. Any
  standing queue congests the road, so while either channel is occupied every
  new vehicle must queue. Each channel releases independently as its own
  group's gate reopens. A queued vehicle whose own group still had gate
  capacity was therefore held up purely by the other vehicle type: that is
  passive queueing.
* After being weighed a vehicle needs a slot at the merge point (capacity 2);
  if none is free it waits on its weigher, blocking the lane.

Dissatisfaction is assigned per customer from temperament, company and the
worst queueing experienced, using the fixed percentage table below. Only
queueing on the approach road counts against satisfaction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

from ..scenarios import Scenario

__all__ = [
    "ConfigurationError",
    "DelaySpec",
    "SimConfig",
    "SimStats",
    "CustomerRecord",
    "ReplicationTally",
    "temporal_ltp",
    "dissatisfaction",
    "kernel_params",
    "STREAM_PURPOSES",
    "SECONDS_PER_DAY",
]

SECONDS_PER_DAY = 86400.0

# One independent random stream per purpose; replications and scenarios get
# their own derivations so options can share arrival patterns (common random
# numbers).
STREAM_PURPOSES = (
    "arrival",
    "vehicle_type",
    "temperament",
    "company",
    "service_lorry",
    "service_non_lorry",
    "travel",
    "merge",
)

DELAY_KIND_CODES = {"fixed": 0, "uniform": 1, "normal": 2, "exponential": 3}


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class DelaySpec:
    """A delay drawn per use: fixed value or a simple distribution."""

    kind: Literal["fixed", "uniform", "normal", "exponential"] = "fixed"
    a: float = 0.0  # value / lower bound / mean / mean
    b: float = 0.0  # upper bound / sd

    def __post_init__(self):
        if self.kind not in DELAY_KIND_CODES:
            raise ConfigurationError(f"delay kind {self.kind!r} not supported")
        if self.a < 0 or self.b < 0:
            raise ConfigurationError("delay parameters must be >= 0")
        if self.kind == "uniform" and self.b < self.a:
            raise ConfigurationError("uniform delay needs a <= b")

    @property
    def code(self) -> int:
        return DELAY_KIND_CODES[self.kind]

    @property
    def is_random(self) -> bool:
        return self.kind != "fixed" and not (self.kind == "uniform" and self.a == self.b)

    @staticmethod
    def fixed(value: float) -> "DelaySpec":
        return DelaySpec("fixed", value, 0.0)


@dataclass(frozen=True)
class SimConfig:
    arrival_rate_per_minute: float = 4.57
    lorry_service_mean: float = 80.0
    lorry_service_sd: float = 2.0
    non_lorry_service_mean: float = 27.0
    non_lorry_service_sd: float = 2.0
    peak_start_hour: float = 12.0
    peak_end_hour: float = 18.0
    peak_ltp: float = 75.0
    bad_temper_probability: float = 0.10
    alone_probability: float = 0.90
    base_lorry_lanes: int = 5
    base_non_lorry_lanes: int = 2
    merge_capacity: int = 2
    advance_free_capacity: int = 2
    lane_queue_depth: int = 2
    pre_weighbridge_travel: DelaySpec = field(default_factory=lambda: DelaySpec.fixed(60.0))
    merge_delay: DelaySpec = field(default_factory=lambda: DelaySpec.fixed(5.0))
    run_days: int = 30
    warmup_days: int = 5
    replications: int = 20
    arrival_mode: Literal["uniform", "poisson"] = "uniform"
    vehicle_mix_mode: Literal["quota", "bernoulli"] = "quota"
    gate_mode: Literal["perGroup", "total"] = "perGroup"

    def __post_init__(self):
        if self.arrival_rate_per_minute <= 0:
            raise ConfigurationError("simulation.arrival_rate_per_minute: must be > 0")
        for name in ("bad_temper_probability", "alone_probability"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigurationError(f"simulation.{name}: {p} not in [0, 1]")
        if self.base_lorry_lanes < 1 or self.base_non_lorry_lanes < 1:
            raise ConfigurationError("simulation: lane counts must be >= 1")
        if not 0.0 <= self.peak_start_hour < self.peak_end_hour <= 24.0:
            raise ConfigurationError("simulation: need 0 <= peak_start_hour < peak_end_hour <= 24")
        if self.warmup_days < 0:
            raise ConfigurationError("simulation.warmup_days: must be >= 0")
        if self.warmup_days >= self.run_days:
            raise ConfigurationError("simulation.warmup_days: must be smaller than run_days")
        if self.merge_capacity < 1:
            raise ConfigurationError("simulation.merge_capacity: must be >= 1")
        if self.lane_queue_depth < 1:
            raise ConfigurationError("simulation.lane_queue_depth: must be >= 1")
        if self.advance_free_capacity < 1:
            raise ConfigurationError("simulation.advance_free_capacity: must be >= 1")
        if self.replications < 1:
            raise ConfigurationError("simulation.replications: must be >= 1")
        min_qcap = self.lane_queue_depth * min(self.base_lorry_lanes, self.base_non_lorry_lanes)
        if self.advance_free_capacity > min_qcap:
            raise ConfigurationError(
                "simulation.advance_free_capacity: exceeds the smallest lane-group queue"
            )

    def paper_scale(self) -> "SimConfig":
        """Full-scale run: a simulated year, 20 warmup days, 10,000 replications."""
        return replace(self, run_days=365, warmup_days=20, replications=10_000)


@dataclass(frozen=True)
class SimStats:
    """Per-customer frequencies in percent, averaged over replications."""

    queue_pct: float
    passive_pct: float
    dissat_pct: float
    queue_sd: float = 0.0
    passive_sd: float = 0.0
    dissat_sd: float = 0.0
    customers: int = 0
    replications: int = 1
    unstable: bool = False

    def __post_init__(self):
        eps = 1e-9
        if not (-eps <= self.passive_pct <= self.queue_pct + eps <= 100.0 + eps):
            raise ValueError(
                f"inconsistent frequencies: passive={self.passive_pct} queue={self.queue_pct}"
            )
        if self.dissat_pct > 100.0 + eps:
            raise ValueError(f"dissatisfaction above 100: {self.dissat_pct}")


@dataclass(frozen=True)
class CustomerRecord:
    id: int
    vehicle_type: Literal["lorry", "non-lorry"]
    arrival_time: float
    bad_temper: bool
    alone: bool
    queued: bool
    passive_queued: bool
    dissatisfaction: int


@dataclass(frozen=True)
class ReplicationTally:
    """Raw counts from one replication; percentages are derived later."""

    customers: int
    queued: int
    passive: int
    dissat_sum: int
    peak_backlog: int
    leftover: int

    def queue_pct(self) -> float:
        return 100.0 * self.queued / self.customers if self.customers else 0.0

    def passive_pct(self) -> float:
        return 100.0 * self.passive / self.customers if self.customers else 0.0

    def dissat_pct(self) -> float:
        return self.dissat_sum / self.customers if self.customers else 0.0


# Dissatisfaction percentage by (temperament, company, queue experience).
# Queue kind: 0 = never queued, 1 = queued, 2 = queued passively.
_DISSAT_TABLE = {
    (False, False): (0, 20, 50),   # good temperament, not alone
    (False, True): (0, 50, 80),    # good temperament, alone
    (True, False): (0, 40, 70),    # bad temperament, not alone
    (True, True): (0, 70, 100),    # bad temperament, alone
}


def dissatisfaction(bad_temper: bool, alone: bool, queue_kind: int) -> int:
    """Exact table lookup; queue_kind is 0 (none), 1 (non-passive) or 2 (passive)."""
    if queue_kind not in (0, 1, 2):
        raise ValueError(f"queue_kind must be 0, 1 or 2, got {queue_kind}")
    return _DISSAT_TABLE[(bool(bad_temper), bool(alone))][queue_kind]


def off_peak_ltp(daily_ltp: float, config: SimConfig) -> float:
    span = config.peak_end_hour - config.peak_start_hour
    return (daily_ltp - config.peak_ltp * span / 24.0) * (24.0 / (24.0 - span))


def temporal_ltp(hour_of_day: float, daily_ltp: float, config: SimConfig) -> float:
    """Lorry share (percent) at a given hour, averaging to the daily share.

    Inside the peak window the share is pinned at ``peak_ltp``; outside it the
    complementary value keeps the time-weighted daily mean equal to
    ``daily_ltp``. Raises if the combination cannot produce a valid percent.
    """
    if not 0.0 <= hour_of_day < 24.0:
        raise ValueError(f"hour_of_day must lie in [0, 24), got {hour_of_day}")
    off = off_peak_ltp(daily_ltp, config)
    if not 0.0 <= off <= 100.0:
        raise ConfigurationError(
            f"daily LTP {daily_ltp} incompatible with peak {config.peak_ltp}: "
            f"off-peak share would be {off:.2f}"
        )
    if config.peak_start_hour <= hour_of_day < config.peak_end_hour:
        return config.peak_ltp
    return off


def kernel_params(option, scenario: Scenario, config: SimConfig) -> dict:
    """Flatten one (option, scenario) cell into scalars for either backend."""
    lorry_lanes = config.base_lorry_lanes + (1 if option.extra_lorry_lane else 0)
    non_lorry_lanes = config.base_non_lorry_lanes + (1 if option.extra_non_lorry_lane else 0)
    off = off_peak_ltp(scenario.ltp, config)
    if not 0.0 <= off <= 100.0:
        raise ConfigurationError(
            f"daily LTP {scenario.ltp} incompatible with peak {config.peak_ltp}"
        )
    if not 0.0 <= config.peak_ltp <= 100.0:
        raise ConfigurationError(f"peak_ltp {config.peak_ltp} not a percent")
    return dict(
        rate_per_sec=config.arrival_rate_per_minute * (1.0 + scenario.vtg) / 60.0,
        peak_p=config.peak_ltp / 100.0,
        off_peak_p=off / 100.0,
        peak_start_sec=config.peak_start_hour * 3600.0,
        peak_end_sec=config.peak_end_hour * 3600.0,
        lorry_mean=config.lorry_service_mean,
        lorry_sd=config.lorry_service_sd,
        non_lorry_mean=config.non_lorry_service_mean,
        non_lorry_sd=config.non_lorry_service_sd,
        bad_temper_p=config.bad_temper_probability,
        alone_p=config.alone_probability,
        lorry_lanes=lorry_lanes,
        non_lorry_lanes=non_lorry_lanes,
        lorry_qcap=lorry_lanes * config.lane_queue_depth,
        non_lorry_qcap=non_lorry_lanes * config.lane_queue_depth,
        merge_capacity=config.merge_capacity,
        advance_free=config.advance_free_capacity,
        travel_kind=config.pre_weighbridge_travel.code,
        travel_a=config.pre_weighbridge_travel.a,
        travel_b=config.pre_weighbridge_travel.b,
        merge_kind=config.merge_delay.code,
        merge_a=config.merge_delay.a,
        merge_b=config.merge_delay.b,
        end_time=config.run_days * SECONDS_PER_DAY,
        warmup_time=config.warmup_days * SECONDS_PER_DAY,
        poisson_arrivals=config.arrival_mode == "poisson",
        bernoulli_mix=config.vehicle_mix_mode == "bernoulli",
        total_gate=config.gate_mode == "total",
    )
