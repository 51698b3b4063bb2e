"""Weighted-sum multi-criteria scoring.

The raw option-by-criterion matrix mixes currencies, percentages and yes/no
judgements. Scoring maps every column onto a common 0-100 scale (100 = best)
and aggregates with stakeholder weights; the option with the highest weighted
total wins. The static variant drops the simulation-derived criteria and
renormalizes the surviving weights, which is what a stakeholder without a
simulation in hand would compute.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal, Mapping

__all__ = [
    "McdaError",
    "CriterionDef",
    "CriteriaMatrix",
    "WeightVector",
    "RankingOutcome",
    "default_criteria",
    "default_weights",
    "assemble_matrix",
    "normalize",
    "weighted_totals",
    "static_mcda",
    "dynamic_mcda",
]

WEIGHT_TOL = 1e-9

Kind = Literal["monetary", "binaryBenefit", "percentCost"]
Direction = Literal["lowerBetter", "higherBetter"]


class McdaError(ValueError):
    pass


@dataclass(frozen=True)
class CriterionDef:
    id: str
    label: str
    kind: Kind
    direction: Direction
    weight: float
    simulation_derived: bool = False


@dataclass(frozen=True)
class WeightVector:
    weights: Mapping[str, float]

    def __post_init__(self):
        for cid, w in self.weights.items():
            if w < 0:
                raise McdaError(f"criteria.weights.{cid}: negative weight {w}")
        total = sum(self.weights.values())
        if abs(total - 1.0) > WEIGHT_TOL:
            raise McdaError(f"criteria.weights: sum to {total}, expected 1")

    def __getitem__(self, cid: str) -> float:
        return self.weights[cid]


@dataclass(frozen=True)
class CriteriaMatrix:
    """Raw or normalized scores: values[option_index][criterion_index]."""

    options: tuple[int, ...]
    criteria: tuple[CriterionDef, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if len(self.values) != len(self.options):
            raise McdaError("matrix rows must match options")
        for row in self.values:
            if len(row) != len(self.criteria):
                raise McdaError("matrix columns must match criteria")

    def column(self, j: int) -> tuple[float, ...]:
        return tuple(row[j] for row in self.values)

    def cell(self, option_id: int, criterion_id: str) -> float:
        i = self.options.index(option_id)
        j = next(k for k, c in enumerate(self.criteria) if c.id == criterion_id)
        return self.values[i][j]


@dataclass(frozen=True)
class RankingOutcome:
    totals: Mapping[int, float]
    order: tuple[int, ...]
    method: Literal["cba", "staticMcda", "dynamicMcda"]


# The eight case-study criteria. Weights reflect the stakeholder consensus:
# port finances first, customer experience second, local community third.
_CATALOG = (
    ("cost_total", "Cost Total", "monetary", "lowerBetter", 0.25, False),
    ("traffic_profit", "Additional traffic profit", "monetary", "higherBetter", 0.25, False),
    ("local_profits", "Local profits", "binaryBenefit", "higherBetter", 0.05, False),
    ("job_opportunities", "Job Opportunities", "binaryBenefit", "higherBetter", 0.05, False),
    ("road_safety", "Road safety", "binaryBenefit", "higherBetter", 0.10, False),
    ("queue_frequency", "Queue frequency", "percentCost", "lowerBetter", 0.10, True),
    ("passive_queue_frequency", "Passive queue frequency", "percentCost", "lowerBetter", 0.10, True),
    ("dissatisfaction", "Customer dissatisfaction", "percentCost", "lowerBetter", 0.10, True),
)


def default_criteria(weights: Mapping[str, float] | None = None) -> tuple[CriterionDef, ...]:
    out = []
    for cid, label, kind, direction, weight, sim in _CATALOG:
        if weights is not None:
            if cid not in weights:
                raise McdaError(f"criteria.weights: missing entry for {cid}")
            weight = weights[cid]
        out.append(CriterionDef(cid, label, kind, direction, weight, sim))
    total = sum(c.weight for c in out)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise McdaError(f"criteria.weights: sum to {total}, expected 1")
    return tuple(out)


def default_weights() -> WeightVector:
    return WeightVector({c.id: c.weight for c in default_criteria()})


def assemble_matrix(breakdowns, sim_stats, binaries=None) -> CriteriaMatrix:
    """Build the raw matrix from cost breakdowns and simulation statistics.

    ``breakdowns`` and ``sim_stats`` are mappings keyed by option id; binary
    judgements default to the case study's (local profits and road safety for
    everyone, job opportunities only where something is built).
    """
    criteria = default_criteria()
    option_ids = sorted(breakdowns)
    if not option_ids:
        raise McdaError("assemble_matrix: no options")
    if binaries is None:
        binaries = {
            oid: {
                "local_profits": True,
                "road_safety": True,
                "job_opportunities": breakdowns[oid].facility > 0,
            }
            for oid in option_ids
        }
    rows = []
    for oid in option_ids:
        if oid not in sim_stats:
            raise McdaError(f"assemble_matrix: option {oid} missing simulation statistics")
        b = breakdowns[oid]
        s = sim_stats[oid]
        flags = binaries[oid]
        row = []
        for c in criteria:
            if c.id == "cost_total":
                row.append(b.cost_total)
            elif c.id == "traffic_profit":
                row.append(b.traffic_profit)
            elif c.id == "queue_frequency":
                row.append(s.queue_pct)
            elif c.id == "passive_queue_frequency":
                row.append(s.passive_pct)
            elif c.id == "dissatisfaction":
                row.append(s.dissat_pct)
            else:
                if c.id not in flags:
                    raise McdaError(f"assemble_matrix: option {oid} missing cell {c.id}")
                row.append(100.0 if flags[c.id] else 0.0)
        rows.append(tuple(row))
    return CriteriaMatrix(tuple(option_ids), criteria, tuple(rows))


def normalize(matrix: CriteriaMatrix, monetary_mode: str = "minmax") -> CriteriaMatrix:
    """Rescale every column to 0-100 with 100 at the best option.

    Degenerate columns (all options equal) score 100 everywhere; otherwise a
    min-max rescale oriented by the criterion direction, so the worst option
    in a column gets exactly 0 and the best exactly 100. Binary columns fall
    out of the same rule because yes/no is carried as 100/0.

    ``monetary_mode="indicator"`` switches monetary columns to all-or-nothing
    scoring: 100 at the best value, 0 elsewhere. On the case-study data the
    two modes agree (each monetary column is either degenerate or two-valued);
    they differ once a monetary column takes three distinct values.
    """
    if monetary_mode not in ("minmax", "indicator"):
        raise McdaError(f"unknown monetary_mode {monetary_mode!r}")
    cols = []
    for j, c in enumerate(matrix.criteria):
        col = matrix.column(j)
        lo, hi = min(col), max(col)
        best = lo if c.direction == "lowerBetter" else hi
        if hi == lo:
            cols.append([100.0] * len(col))
        elif monetary_mode == "indicator" and c.kind == "monetary":
            cols.append([100.0 if x == best else 0.0 for x in col])
        elif c.direction == "lowerBetter":
            # ratio before scaling keeps every cell in [0, 100] exactly
            cols.append([100.0 * ((hi - x) / (hi - lo)) for x in col])
        else:
            cols.append([100.0 * ((x - lo) / (hi - lo)) for x in col])
    rows = tuple(
        tuple(cols[j][i] for j in range(len(matrix.criteria)))
        for i in range(len(matrix.options))
    )
    # normalized cells are all higher-better by construction
    criteria = tuple(replace(c, direction="higherBetter") for c in matrix.criteria)
    return CriteriaMatrix(matrix.options, criteria, rows)


def weighted_totals(
    normalized: CriteriaMatrix, weights: WeightVector, method="dynamicMcda"
) -> RankingOutcome:
    """Aggregate normalized scores into per-option totals and rank them."""
    ids = {c.id for c in normalized.criteria}
    if ids != set(weights.weights):
        missing = ids.symmetric_difference(weights.weights)
        raise McdaError(f"weights do not match criteria: {sorted(missing)}")
    totals = {}
    for i, oid in enumerate(normalized.options):
        totals[oid] = sum(
            normalized.values[i][j] * weights[c.id]
            for j, c in enumerate(normalized.criteria)
        )
    order = tuple(sorted(totals, key=lambda oid: (-totals[oid], oid)))
    return RankingOutcome(totals=totals, order=order, method=method)


def dynamic_mcda(matrix: CriteriaMatrix, weights: WeightVector) -> RankingOutcome:
    return weighted_totals(normalize(matrix), weights, method="dynamicMcda")


def static_mcda(matrix: CriteriaMatrix, weights: WeightVector) -> RankingOutcome:
    """Score without the simulation-derived criteria.

    The surviving weights are renormalized to sum to one, which keeps the
    totals on the same 0-100 scale.
    """
    keep = [j for j, c in enumerate(matrix.criteria) if not c.simulation_derived]
    if not keep:
        raise McdaError("static_mcda: every criterion is simulation-derived")
    criteria = tuple(matrix.criteria[j] for j in keep)
    rows = tuple(tuple(row[j] for j in keep) for row in matrix.values)
    sub = CriteriaMatrix(matrix.options, criteria, rows)
    remaining = sum(weights[c.id] for c in criteria)
    sub_weights = WeightVector({c.id: weights[c.id] / remaining for c in criteria})
    outcome = weighted_totals(normalize(sub), sub_weights, method="staticMcda")
    return outcome
