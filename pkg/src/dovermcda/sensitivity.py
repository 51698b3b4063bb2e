"""Monte-Carlo robustness analysis of the option ranking.

Each iteration jitters the 0-100 score matrix multiplicatively (and the
weights, in the widest variant), re-runs the scoring rescale and records the
winner. Three variants, from narrowest to widest:

* selectedCriteria: only scores that genuinely differ between options move;
  criteria judged equal for every option (traffic profit, local profits,
  road safety) stay fixed.
* allCriteria: every score moves, acknowledging that the "equal" judgements
  themselves carry error.
* criteriaAndWeights: additionally the stakeholder weights move, renormalized
  to keep summing to one.

Iteration streams derive from (seed, iteration index), so chunked or parallel
execution reproduces the serial result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping

import numpy as np

from .engine import RandomStream
from .mcda import CriteriaMatrix, McdaError, WeightVector

__all__ = [
    "PerturbationConfig",
    "SensitivityReport",
    "DEFAULT_FROZEN",
    "perturb_scores",
    "perturb_weights",
    "run_analysis",
]

Variant = Literal["selectedCriteria", "allCriteria", "criteriaAndWeights"]

# criteria considered equal across options, held fixed in the narrow variant
DEFAULT_FROZEN = frozenset({"traffic_profit", "local_profits", "road_safety"})


@dataclass(frozen=True)
class PerturbationConfig:
    variant: Variant = "allCriteria"
    amplitude: float = 0.1
    iterations: int = 10_000
    frozen_criteria: frozenset = DEFAULT_FROZEN
    clamp_floor: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.amplitude < 1.0:
            raise McdaError(f"sensitivity.amplitude: {self.amplitude} not in [0, 1)")
        if self.iterations < 1:
            raise McdaError("sensitivity.iterations: must be >= 1")
        if self.variant not in ("selectedCriteria", "allCriteria", "criteriaAndWeights"):
            raise McdaError(f"sensitivity.variant: unknown variant {self.variant!r}")
        object.__setattr__(self, "frozen_criteria", frozenset(self.frozen_criteria))

    @property
    def effective_frozen(self) -> frozenset:
        return self.frozen_criteria if self.variant == "selectedCriteria" else frozenset()


@dataclass(frozen=True)
class SensitivityReport:
    variant: Variant
    iterations: int
    seed: int
    top_rank_frequency: Mapping[int, float]  # option id -> percent
    rank_distribution: Mapping[int, tuple[float, ...]]  # option id -> percent per rank


def _frozen_mask(matrix: CriteriaMatrix, frozen: frozenset) -> np.ndarray:
    return np.array([c.id in frozen for c in matrix.criteria])


def _perturb_values(values: np.ndarray, frozen_cols: np.ndarray, amplitude: float,
                    floor: float, rng: np.random.Generator) -> np.ndarray:
    alpha = rng.uniform(1.0 - amplitude, 1.0 + amplitude, size=values.shape)
    alpha[:, frozen_cols] = 1.0
    return np.maximum(values * alpha, floor)


def _renormalize(values: np.ndarray) -> np.ndarray:
    # scoring rescale for already-oriented columns: best 100, worst 0,
    # degenerate columns score 100 everywhere
    lo = values.min(axis=0)
    hi = values.max(axis=0)
    span = hi - lo
    out = np.full_like(values, 100.0)
    nz = span > 0
    out[:, nz] = 100.0 * ((values[:, nz] - lo[nz]) / span[nz])
    return out


def perturb_scores(matrix: CriteriaMatrix, config: PerturbationConfig,
                   stream: RandomStream) -> CriteriaMatrix:
    """One multiplicative jitter of a normalized matrix; frozen columns keep
    a factor of exactly 1. Cells are floored, never capped."""
    values = np.asarray(matrix.values, dtype=float)
    perturbed = _perturb_values(
        values,
        _frozen_mask(matrix, config.effective_frozen),
        config.amplitude,
        config.clamp_floor,
        stream.generator,
    )
    return CriteriaMatrix(
        matrix.options, matrix.criteria, tuple(map(tuple, perturbed.tolist()))
    )


def perturb_weights(weights: WeightVector, amplitude: float,
                    stream: RandomStream) -> WeightVector:
    """Jitter each weight multiplicatively, then renormalize to sum one."""
    ids = list(weights.weights)
    w = np.array([weights[i] for i in ids])
    beta = stream.generator.uniform(1.0 - amplitude, 1.0 + amplitude, size=len(ids))
    w = w * beta
    w = w / w.sum()
    return WeightVector(dict(zip(ids, w.tolist())))


def _iteration_rng(seed: int, iteration: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(iteration,))
    return np.random.Generator(np.random.PCG64(ss))


def run_analysis(matrix: CriteriaMatrix, weights: WeightVector,
                 config: PerturbationConfig) -> SensitivityReport:
    """Top-rank frequencies over perturbed re-scorings of a normalized matrix."""
    option_ids = matrix.options
    values = np.asarray(matrix.values, dtype=float)
    frozen_cols = _frozen_mask(matrix, config.effective_frozen)
    ids = [c.id for c in matrix.criteria]
    if set(ids) != set(weights.weights):
        missing = set(ids).symmetric_difference(weights.weights)
        raise McdaError(f"weights do not match criteria: {sorted(missing)}")
    w_base = np.array([weights[i] for i in ids])
    perturb_w = config.variant == "criteriaAndWeights"

    m = len(option_ids)
    rank_counts = np.zeros((m, m), dtype=np.int64)
    for it in range(config.iterations):
        rng = _iteration_rng(config.seed, it)
        perturbed = _perturb_values(values, frozen_cols, config.amplitude,
                                    config.clamp_floor, rng)
        rescored = _renormalize(perturbed)
        w = w_base
        if perturb_w:
            beta = rng.uniform(1.0 - config.amplitude, 1.0 + config.amplitude, size=len(w))
            w = w_base * beta
            w = w / w.sum()
        totals = rescored @ w
        # sort by (-total, option id)
        ranking = sorted(range(m), key=lambda i: (-totals[i], option_ids[i]))
        for rank, i in enumerate(ranking):
            rank_counts[i, rank] += 1

    freq = {
        option_ids[i]: 100.0 * int(rank_counts[i, 0]) / config.iterations
        for i in range(m)
    }
    dist = {
        option_ids[i]: tuple(
            100.0 * int(rank_counts[i, r]) / config.iterations for r in range(m)
        )
        for i in range(m)
    }
    return SensitivityReport(
        variant=config.variant,
        iterations=config.iterations,
        seed=config.seed,
        top_rank_frequency=freq,
        rank_distribution=dist,
    )
