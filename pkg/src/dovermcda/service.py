"""What-if HTTP service over a completed analysis run.

The service never re-runs the traffic simulation per request: scoring and
sensitivity recompute live against the cached simulation statistics of an
immutable artifact snapshot. Every response carries the provenance hash of
the configuration that produced the snapshot, so clients can detect staleness.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .mcda import (
    CriteriaMatrix,
    McdaError,
    WeightVector,
    normalize,
    static_mcda,
    weighted_totals,
)
from .pipeline import RunArtifact, _matrix_to_dict, _report_to_dict, artifact_to_dict
from .sensitivity import PerturbationConfig, run_analysis

__all__ = ["create_app", "serve"]


class ScoreRequest(BaseModel):
    weights: dict[str, float]


class MatrixScoreRequest(BaseModel):
    # raw-score overrides: option id -> {criterion id -> raw value}
    overrides: dict[int, dict[str, float]] = Field(default_factory=dict)
    weights: dict[str, float] | None = None


class SensitivityRequest(BaseModel):
    variant: Literal["selectedCriteria", "allCriteria", "criteriaAndWeights"] = "allCriteria"
    amplitude: float = 0.1
    iterations: int = 10_000
    seed: int | None = None
    frozen_criteria: list[str] | None = None
    weights: dict[str, float] | None = None


def _ranking_payload(outcome) -> dict:
    return {
        "totals": {str(k): v for k, v in outcome.totals.items()},
        "order": list(outcome.order),
        "method": outcome.method,
    }


def create_app(artifact: RunArtifact, frontend_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="dovermcda what-if service")
    stamp = artifact.provenance["config_hash"]

    def with_provenance(payload: dict) -> dict:
        payload["provenance"] = artifact.provenance
        return payload

    def parse_weights(raw: dict[str, float] | None) -> WeightVector:
        if raw is None:
            return artifact.config.weights
        try:
            return WeightVector(raw)
        except McdaError as exc:
            raise HTTPException(status_code=400, detail={"field": "weights", "message": str(exc)})

    @app.get("/api/artifact")
    def get_artifact():
        return artifact_to_dict(artifact)

    @app.get("/api/config")
    def get_config():
        return with_provenance({"config": artifact.config.as_dict()})

    @app.get("/api/simulation")
    def get_simulation():
        from .pipeline import _simulation_rows

        return with_provenance({
            "cells": _simulation_rows(artifact),
            "expected": {
                str(oid): {
                    "queue_pct": st.queue_pct,
                    "passive_pct": st.passive_pct,
                    "dissat_pct": st.dissat_pct,
                    "customers": st.customers,
                }
                for oid, st in artifact.simulation.expected.items()
            },
        })

    @app.post("/api/score")
    def post_score(req: ScoreRequest):
        weights = parse_weights(req.weights)
        try:
            dynamic = weighted_totals(artifact.normalized_matrix, weights)
            static = static_mcda(artifact.raw_matrix, weights)
        except McdaError as exc:
            raise HTTPException(status_code=400, detail={"field": "weights", "message": str(exc)})
        return with_provenance({
            "dynamic": _ranking_payload(dynamic),
            "static": _ranking_payload(static),
            "cba": _ranking_payload(artifact.rankings["cba"]),
        })

    @app.post("/api/score/matrix")
    def post_score_matrix(req: MatrixScoreRequest):
        weights = parse_weights(req.weights)
        base = artifact.raw_matrix
        values = [list(row) for row in base.values]
        col_of = {c.id: j for j, c in enumerate(base.criteria)}
        for oid, cells in req.overrides.items():
            if oid not in base.options:
                raise HTTPException(status_code=400,
                                    detail={"field": "overrides", "message": f"unknown option {oid}"})
            i = base.options.index(oid)
            for cid, value in cells.items():
                if cid not in col_of:
                    raise HTTPException(status_code=400,
                                        detail={"field": "overrides", "message": f"unknown criterion {cid}"})
                values[i][col_of[cid]] = value
        matrix = CriteriaMatrix(base.options, base.criteria, tuple(map(tuple, values)))
        normalized = normalize(matrix)
        outcome = weighted_totals(normalized, weights)
        return with_provenance({
            "normalized": _matrix_to_dict(normalized),
            "dynamic": _ranking_payload(outcome),
        })

    @app.post("/api/sensitivity")
    def post_sensitivity(req: SensitivityRequest):
        weights = parse_weights(req.weights)
        try:
            cfg = PerturbationConfig(
                variant=req.variant,
                amplitude=req.amplitude,
                iterations=req.iterations,
                frozen_criteria=(frozenset(req.frozen_criteria)
                                 if req.frozen_criteria is not None
                                 else artifact.config.frozen_criteria),
                seed=req.seed if req.seed is not None else artifact.config.master_seed,
            )
            report = run_analysis(artifact.normalized_matrix, weights, cfg)
        except McdaError as exc:
            raise HTTPException(status_code=400, detail={"field": "sensitivity", "message": str(exc)})
        return with_provenance({"report": _report_to_dict(report)})

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app


def serve(artifact: RunArtifact, host: str = "127.0.0.1", port: int = 8000,
          frontend_dir: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(artifact, frontend_dir), host=host, port=port)
