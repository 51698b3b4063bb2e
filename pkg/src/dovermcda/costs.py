"""Monetary scoring for the expansion options.

All figures come from the port's 2010-2011 accounts. Spending comes out of
savings, so every cash cost is scaled by an effective-cost multiplier that
prices in the lost interest. The multiplier that reproduces the published
effective figures (92,148.8 for a 90,000 lane, 51,193.78 for 50,000 of
greenery, 205,146.8 per safety step) is 1.0238756, slightly above the naive
interest factor 1 + 1,031,000/46,092,000; both are available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .mcda import RankingOutcome
from .scenarios import DiscreteDistribution, ValidationError, expectation_over_vtg

__all__ = [
    "FinancialParams",
    "OptionSpec",
    "CostBreakdown",
    "SafetyStaffing",
    "interest_factor",
    "effective_cost",
    "safety_cost",
    "safety_staffing",
    "heaviside",
    "environmental_cost",
    "traffic_profit",
    "expected_breakdown",
    "cba_rank",
    "default_options",
]


@dataclass(frozen=True)
class FinancialParams:
    interest_earned: float = 1_031_000.0
    cash_asset: float = 46_092_000.0
    effective_multiplier: float = 1.0238756
    lane_cost: float = 90_000.0
    total_salaries: float = 12_488_000.0
    key_remuneration: float = 502_000.0
    staff_count: int = 344
    key_staff_count: int = 8
    new_staff_per_step: int = 5
    car_cost: float = 20_000.0
    car_maintenance: float = 2_000.0
    greenery_cost: float = 50_000.0
    base_profit: float = 7_588_000.0
    vtg_step: float = 0.10

    def __post_init__(self):
        for name in ("interest_earned", "cash_asset", "lane_cost", "total_salaries",
                     "key_remuneration", "car_cost", "car_maintenance",
                     "greenery_cost", "base_profit"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name}: must be >= 0")
        if self.staff_count <= self.key_staff_count:
            raise ValidationError("staff_count: must exceed key_staff_count")
        if not 0.0 < self.vtg_step <= 1.0:
            raise ValidationError(f"vtg_step: {self.vtg_step} not in (0, 1]")


@dataclass(frozen=True)
class OptionSpec:
    """One expansion option: lane layout plus its emission profile.

    Adding any lane improves traffic flow enough to drop per-car fuel use to
    0.85 consumption units; the do-nothing option stays at 1.0.
    """

    id: int
    name: str
    extra_lorry_lane: bool = False
    extra_non_lorry_lane: bool = False
    requires_facility_build: bool = False

    def __post_init__(self):
        if self.extra_lorry_lane and self.extra_non_lorry_lane:
            raise ValidationError("option: only room for one additional lane")

    @property
    def consumption_unit(self) -> float:
        return 0.85 if (self.extra_lorry_lane or self.extra_non_lorry_lane) else 1.0


def default_options() -> tuple[OptionSpec, ...]:
    return (
        OptionSpec(1, "do nothing"),
        OptionSpec(2, "extra lorry lane", extra_lorry_lane=True, requires_facility_build=True),
        OptionSpec(3, "extra non-lorry lane", extra_non_lorry_lane=True, requires_facility_build=True),
    )


@dataclass(frozen=True)
class CostBreakdown:
    """Expected monetary components for one option, over the VTG outlook."""

    option_id: int
    environmental: float
    facility: float
    safety: float
    cost_total: float
    traffic_profit: float
    net_benefit: float


class SafetyStaffing(NamedTuple):
    steps: int
    rounded_up: bool
    cost: float


def interest_factor(params: FinancialParams) -> float:
    """1 plus the realized interest rate on the port's cash assets."""
    if params.cash_asset == 0:
        raise ZeroDivisionError("cash_asset is zero, interest rate undefined")
    return 1.0 + params.interest_earned / params.cash_asset


def effective_cost(base: float, params: FinancialParams) -> float:
    """A cash cost plus the interest that the spent savings stop earning."""
    if base < 0:
        raise ValidationError(f"base cost must be >= 0, got {base}")
    return base * params.effective_multiplier


def safety_staffing(vtg: float, params: FinancialParams) -> SafetyStaffing:
    """Staffing steps and cost to hold the accident rate at extra traffic.

    Each 10% of growth requires five new staff and one patrol car. Fractional
    steps are rounded up: hiring cannot be fractional and under-staffing is
    not acceptable for safety, so the cautious side wins.
    """
    if vtg < 0:
        raise ValidationError(f"vtg must be >= 0, got {vtg}")
    raw_steps = vtg / params.vtg_step
    steps = math.ceil(raw_steps - 1e-9)
    rounded = abs(steps - raw_steps) > 1e-9
    per_step = (
        params.new_staff_per_step
        * (params.total_salaries - params.key_remuneration)
        / (params.staff_count - params.key_staff_count)
        + params.car_cost
        + params.car_maintenance
    )
    cost = steps * effective_cost(per_step, params)
    return SafetyStaffing(steps=steps, rounded_up=rounded, cost=cost)


def safety_cost(vtg: float, params: FinancialParams) -> float:
    return safety_staffing(vtg, params).cost


def heaviside(x: float) -> int:
    """1 for strictly positive arguments, else 0."""
    return 1 if x > 0 else 0


def environmental_cost(option: OptionSpec, vtg: float, params: FinancialParams) -> float:
    """Greenery cost, incurred only when total fuel consumption rises.

    Consumption is consumption-units-per-car times traffic; the baseline is
    1.0. The step function means the cost is all-or-nothing.
    """
    exceeds = heaviside(option.consumption_unit * (1.0 + vtg) - 1.0)
    return effective_cost(params.greenery_cost, params) * exceeds


def traffic_profit(vtg: float, params: FinancialParams) -> float:
    """Additional annual profit, assumed linear in traffic growth."""
    if vtg < 0:
        raise ValidationError(f"vtg must be >= 0, got {vtg}")
    return vtg * params.base_profit


def expected_breakdown(
    option: OptionSpec, vtg_dist: DiscreteDistribution, params: FinancialParams
) -> CostBreakdown:
    """Expected cost components and net benefit for one option."""
    env = expectation_over_vtg(
        {v: environmental_cost(option, v, params) for v in vtg_dist.values}, vtg_dist
    )
    safety = expectation_over_vtg(
        {v: safety_cost(v, params) for v in vtg_dist.values}, vtg_dist
    )
    facility = effective_cost(params.lane_cost, params) if option.requires_facility_build else 0.0
    profit = expectation_over_vtg(
        {v: traffic_profit(v, params) for v in vtg_dist.values}, vtg_dist
    )
    cost_total = env + facility + safety
    return CostBreakdown(
        option_id=option.id,
        environmental=env,
        facility=facility,
        safety=safety,
        cost_total=cost_total,
        traffic_profit=profit,
        net_benefit=profit - cost_total,
    )


def cba_rank(breakdowns: Sequence[CostBreakdown]) -> RankingOutcome:
    """Rank options by expected net benefit, highest first; ties by option id."""
    if not breakdowns:
        raise ValidationError("cba_rank: need at least one option")
    totals = {b.option_id: b.net_benefit for b in breakdowns}
    order = sorted(totals, key=lambda oid: (-totals[oid], oid))
    return RankingOutcome(totals=totals, order=tuple(order), method="cba")
