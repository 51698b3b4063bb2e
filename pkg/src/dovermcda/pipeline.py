"""End-to-end analysis pipeline.

Stage order follows the decision process: options and criteria are fixed by
the configuration, the simulation scores the dynamic criteria, weights fold
everything into rankings (cost-benefit, static and dynamic weighted scoring),
and the sensitivity analysis examines how stable the winner is. Each stage
failure is reported with its stage name.

All outputs are deterministic functions of the configuration and master seed;
the provenance hash of the producing configuration is embedded in every file,
and a rerun with the same inputs writes byte-identical artifacts.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import __version__
from .config import PipelineConfig, config_hash
from .costs import cba_rank, expected_breakdown
from .mcda import (
    CriteriaMatrix,
    assemble_matrix,
    normalize,
    static_mcda,
    weighted_totals,
)
from .scenarios import ScenarioSet, build_scenario_set
from .sensitivity import SensitivityReport, run_analysis
from .weighbridge import (
    SimStats,
    SimulationTable,
    active_backend,
    expected_stats_from_table,
    simulation_table,
)

__all__ = [
    "PipelineError",
    "RunArtifact",
    "run_pipeline",
    "load_simulation_table",
    "baseline_simulation_table",
    "write_artifact",
]

BASELINE_TABLE_RESOURCE = "dover_baseline_stats.csv"


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class RunArtifact:
    provenance: dict
    scenario_set: ScenarioSet
    breakdowns: dict  # option id -> CostBreakdown
    simulation: SimulationTable
    raw_matrix: CriteriaMatrix
    normalized_matrix: CriteriaMatrix
    rankings: dict  # method -> RankingOutcome
    sensitivity: dict  # variant -> SensitivityReport
    config: PipelineConfig


def load_simulation_table(path: str | Path, scenario_set: ScenarioSet,
                          option_ids) -> SimulationTable:
    """Read a per-scenario statistics table (CSV) for simulation bypass.

    Needs columns option, scenario, queue_pct, passive_pct, dissat_pct;
    optional sd and count columns are carried through when present.
    """
    text = Path(path).read_text()
    return _table_from_csv(text, scenario_set, option_ids)


def baseline_simulation_table(scenario_set: ScenarioSet, option_ids) -> SimulationTable:
    """The case study's published per-scenario statistics, bundled as data."""
    text = (resources.files("dovermcda") / "data" / BASELINE_TABLE_RESOURCE).read_text()
    return _table_from_csv(text, scenario_set, option_ids)


def _table_from_csv(text: str, scenario_set: ScenarioSet, option_ids) -> SimulationTable:
    cells = {}
    reader = csv.DictReader(io.StringIO(text))
    required = {"option", "scenario", "queue_pct", "passive_pct", "dissat_pct"}
    if reader.fieldnames is None or not required.issubset(reader.fieldnames):
        raise ValueError(f"simulation table needs columns {sorted(required)}")
    for row in reader:
        key = (int(row["option"]), int(row["scenario"]))
        cells[key] = SimStats(
            queue_pct=float(row["queue_pct"]),
            passive_pct=float(row["passive_pct"]),
            dissat_pct=float(row["dissat_pct"]),
            queue_sd=float(row.get("queue_sd") or 0.0),
            passive_sd=float(row.get("passive_sd") or 0.0),
            dissat_sd=float(row.get("dissat_sd") or 0.0),
            customers=int(row.get("n") or 0),
        )
    expected = {}
    for oid in option_ids:
        per_scenario = {}
        for s in scenario_set:
            if (oid, s.id) not in cells:
                raise ValueError(f"simulation table: missing cell option={oid} scenario={s.id}")
            per_scenario[s.id] = cells[(oid, s.id)]
        expected[oid] = expected_stats_from_table(per_scenario, scenario_set)
    return SimulationTable(cells=cells, expected=expected)


def _stage(name, fn):
    try:
        return fn()
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def run_pipeline(config: PipelineConfig, bypass_table: SimulationTable | None = None,
                 output_dir: str | Path | None = None,
                 write: bool = True) -> RunArtifact:
    """Execute every stage and (optionally) write all tables and reports."""
    scenario_set = _stage("scenarios", lambda: build_scenario_set(config.vtg, config.ltp))

    breakdowns = _stage("costs", lambda: {
        o.id: expected_breakdown(o, config.vtg, config.financial) for o in config.options
    })

    if bypass_table is not None:
        simulation = bypass_table
        sim_source = "injected"
    else:
        simulation = _stage("simulation", lambda: simulation_table(
            config.options, scenario_set, config.simulation, config.master_seed
        ))
        sim_source = f"simulated/{active_backend()}"

    raw = _stage("matrix", lambda: assemble_matrix(breakdowns, simulation.expected))
    normalized = _stage("normalize", lambda: normalize(raw))

    rankings = _stage("score", lambda: {
        "cba": cba_rank(list(breakdowns.values())),
        "staticMcda": static_mcda(raw, config.weights),
        "dynamicMcda": weighted_totals(normalized, config.weights),
    })

    sensitivity = _stage("sensitivity", lambda: {
        variant: run_analysis(normalized, config.weights, config.sensitivity_config(variant))
        for variant in config.sensitivity_variants
    })

    provenance = {
        "config_hash": config_hash(config),
        "master_seed": config.master_seed,
        "tool_version": __version__,
        "simulation_source": sim_source,
    }
    artifact = RunArtifact(
        provenance=provenance,
        scenario_set=scenario_set,
        breakdowns=breakdowns,
        simulation=simulation,
        raw_matrix=raw,
        normalized_matrix=normalized,
        rankings=rankings,
        sensitivity=sensitivity,
        config=config,
    )
    if write:
        out = Path(output_dir if output_dir is not None else config.output_dir)
        _stage("write", lambda: write_artifact(artifact, out))
    return artifact


# ---------------------------------------------------------------------------
# serialization

def artifact_to_dict(artifact: RunArtifact) -> dict:
    """Full artifact as plain JSON-ready data."""
    sim_rows = _simulation_rows(artifact)
    return {
        "provenance": artifact.provenance,
        "scenarios": [dataclasses.asdict(s) for s in artifact.scenario_set],
        "cost_breakdowns": {
            str(oid): dataclasses.asdict(b) for oid, b in artifact.breakdowns.items()
        },
        "simulation": {
            "cells": sim_rows,
            "expected": {
                str(oid): dataclasses.asdict(st)
                for oid, st in artifact.simulation.expected.items()
            },
        },
        "scores": {
            "raw": _matrix_to_dict(artifact.raw_matrix),
            "normalized": _matrix_to_dict(artifact.normalized_matrix),
            "weights": dict(artifact.config.weights.weights),
        },
        "rankings": {
            method: {
                "totals": {str(k): v for k, v in r.totals.items()},
                "order": list(r.order),
                "method": r.method,
            }
            for method, r in artifact.rankings.items()
        },
        "sensitivity": {
            variant: _report_to_dict(rep) for variant, rep in artifact.sensitivity.items()
        },
        "config": artifact.config.as_dict(),
    }


def _report_to_dict(report: SensitivityReport) -> dict:
    return {
        "variant": report.variant,
        "iterations": report.iterations,
        "seed": report.seed,
        "top_rank_frequency": {str(k): v for k, v in report.top_rank_frequency.items()},
        "rank_distribution": {
            str(k): list(v) for k, v in report.rank_distribution.items()
        },
    }


def _matrix_to_dict(matrix: CriteriaMatrix) -> dict:
    return {
        "options": list(matrix.options),
        "criteria": [
            {"id": c.id, "label": c.label, "kind": c.kind,
             "simulation_derived": c.simulation_derived}
            for c in matrix.criteria
        ],
        "values": [list(row) for row in matrix.values],
    }


def _simulation_rows(artifact: RunArtifact) -> list[dict]:
    rows = []
    for (oid, sid), st in sorted(artifact.simulation.cells.items()):
        s = artifact.scenario_set.by_id(sid)
        rows.append({
            "option": oid,
            "scenario": sid,
            "vtg": s.vtg,
            "ltp": s.ltp,
            "probability": s.probability,
            "queue_pct": st.queue_pct,
            "passive_pct": st.passive_pct,
            "dissat_pct": st.dissat_pct,
            "queue_sd": st.queue_sd,
            "passive_sd": st.passive_sd,
            "dissat_sd": st.dissat_sd,
            "n": st.customers,
        })
    return rows


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".6g")
    return str(x)


def write_artifact(artifact: RunArtifact, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stamp = artifact.provenance["config_hash"]

    def write_csv(name: str, header: list[str], rows: list[list]) -> None:
        with open(out / name, "w", newline="") as fh:
            fh.write(f"# config_hash={stamp}\n")
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows([[_fmt(x) for x in row] for row in rows])

    sim_rows = _simulation_rows(artifact)
    write_csv(
        "simulation.csv",
        ["option", "scenario", "vtg", "ltp", "probability", "queue_pct",
         "passive_pct", "dissat_pct", "queue_sd", "passive_sd", "dissat_sd", "n"],
        [[r[k] for k in ("option", "scenario", "vtg", "ltp", "probability",
                         "queue_pct", "passive_pct", "dissat_pct", "queue_sd",
                         "passive_sd", "dissat_sd", "n")] for r in sim_rows],
    )
    write_csv(
        "simulation_expected.csv",
        ["option", "queue_pct", "passive_pct", "dissat_pct",
         "queue_sd", "passive_sd", "dissat_sd", "n"],
        [[oid, st.queue_pct, st.passive_pct, st.dissat_pct,
          st.queue_sd, st.passive_sd, st.dissat_sd, st.customers]
         for oid, st in sorted(artifact.simulation.expected.items())],
    )

    option_ids = artifact.raw_matrix.options
    for name, matrix in (("scores_raw.csv", artifact.raw_matrix),
                         ("scores_normalized.csv", artifact.normalized_matrix)):
        write_csv(
            name,
            ["criterion", "label"] + [f"option_{oid}" for oid in option_ids],
            [[c.id, c.label] + [matrix.values[i][j] for i in range(len(option_ids))]
             for j, c in enumerate(matrix.criteria)],
        )
    weights = artifact.config.weights
    dyn = artifact.rankings["dynamicMcda"]
    write_csv(
        "scores_weighted.csv",
        ["criterion", "label", "weight"] + [f"option_{oid}" for oid in option_ids],
        [[c.id, c.label, weights[c.id]]
         + [artifact.normalized_matrix.values[i][j] for i in range(len(option_ids))]
         for j, c in enumerate(artifact.normalized_matrix.criteria)]
        + [["total", "Total", ""] + [dyn.totals[oid] for oid in option_ids]],
    )

    sens_rows = []
    for variant, rep in artifact.sensitivity.items():
        for oid in sorted(rep.top_rank_frequency):
            sens_rows.append([variant, oid, rep.top_rank_frequency[oid], rep.iterations])
    write_csv("sensitivity.csv", ["variant", "option", "top_rank_pct", "iterations"], sens_rows)

    (out / "artifact.json").write_text(
        json.dumps(artifact_to_dict(artifact), indent=2, sort_keys=True) + "\n"
    )
