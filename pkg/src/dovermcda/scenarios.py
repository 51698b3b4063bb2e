"""Discrete scenario tree over vehicle traffic growth (VTG) and lorry traffic
percentage (LTP).

Both drivers are modelled as small discrete distributions assumed independent,
so the scenario set is their product: nine leaves for the Dover defaults.
VTG is handled as a fraction (0.1 == +10%) while LTP stays in percent, because
that is how each one enters the downstream formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

__all__ = [
    "ValidationError",
    "DiscreteDistribution",
    "Scenario",
    "ScenarioSet",
    "build_scenario_set",
    "expectation",
    "expectation_over_vtg",
    "default_vtg_distribution",
    "default_ltp_distribution",
]

PROB_TOL = 1e-12


class ValidationError(ValueError):
    """Raised when a distribution or scenario set violates its invariants."""


@dataclass(frozen=True)
class DiscreteDistribution:
    """Ordered (value, probability) pairs with strictly increasing values."""

    entries: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValidationError("entries: distribution must not be empty")
        values = [v for v, _ in self.entries]
        probs = [p for _, p in self.entries]
        for i in range(1, len(values)):
            if values[i] <= values[i - 1]:
                raise ValidationError(
                    f"entries[{i}].value: values must be strictly increasing "
                    f"({values[i]} after {values[i - 1]})"
                )
        for i, p in enumerate(probs):
            if not 0.0 < p <= 1.0:
                raise ValidationError(f"entries[{i}].probability: {p} not in (0, 1]")
        total = sum(probs)
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"entries: probabilities sum to {total}, expected 1")

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.entries)

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.entries)

    def probability_of(self, value: float) -> float:
        for v, p in self.entries:
            if v == value:
                return p
        raise ValidationError(f"value {value} not in distribution support")


@dataclass(frozen=True)
class Scenario:
    """One leaf of the scenario tree: a (vtg, ltp) pair and its probability."""

    id: int
    vtg: float  # fraction: 0.1 means +10% traffic
    ltp: float  # percent: e.g. 44.17
    probability: float


@dataclass(frozen=True)
class ScenarioSet:
    scenarios: tuple[Scenario, ...]

    def __post_init__(self):
        ids = [s.id for s in self.scenarios]
        if len(set(ids)) != len(ids):
            raise ValidationError("scenarios: ids must be unique")
        total = sum(s.probability for s in self.scenarios)
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"scenarios: probabilities sum to {total}, expected 1")

    def __iter__(self):
        return iter(self.scenarios)

    def __len__(self):
        return len(self.scenarios)

    def by_id(self, scenario_id: int) -> Scenario:
        for s in self.scenarios:
            if s.id == scenario_id:
                return s
        raise KeyError(f"no scenario with id {scenario_id}")


def default_vtg_distribution() -> DiscreteDistribution:
    """Dover case-study growth outlook: 0%, +10%, +20% with weights 1/4, 1/2, 1/4."""
    return DiscreteDistribution(((0.0, 0.25), (0.1, 0.5), (0.2, 0.25)))


def default_ltp_distribution() -> DiscreteDistribution:
    """Dover case-study lorry share outlook (percent): 44.17, 46.38, 48.59."""
    return DiscreteDistribution(((44.17, 0.5), (46.38, 0.25), (48.59, 0.25)))


def build_scenario_set(
    vtg: DiscreteDistribution, ltp: DiscreteDistribution
) -> ScenarioSet:
    """Cross the two distributions into the numbered scenario tree.

    Numbering runs VTG-outer, LTP-inner, so scenario 1 pairs the lowest VTG
    with the lowest LTP. Probabilities multiply (independence).
    """
    scenarios = []
    next_id = 1
    for v, pv in vtg.entries:
        for l, pl in ltp.entries:
            scenarios.append(Scenario(id=next_id, vtg=v, ltp=l, probability=pv * pl))
            next_id += 1
    return ScenarioSet(tuple(scenarios))


def expectation(values: Mapping[int, float], scenario_set: ScenarioSet) -> float:
    """Probability-weighted sum of a per-scenario quantity keyed by scenario id."""
    total = 0.0
    for s in scenario_set:
        if s.id not in values:
            raise ValidationError(f"values: missing scenario id {s.id}")
        total += s.probability * values[s.id]
    return total


def expectation_over_vtg(
    values: Mapping[float, float], vtg: DiscreteDistribution
) -> float:
    """Expectation of a quantity that depends on VTG only, keyed by VTG value."""
    total = 0.0
    for v, p in vtg.entries:
        if v not in values:
            raise ValidationError(f"values: missing vtg value {v}")
        total += p * values[v]
    return total
