"""Pipeline configuration: a YAML document with nested sections.

Every field defaults to the Dover case-study value, so an empty document (or
no document at all) reproduces the published analysis. Validation errors name
the offending field path.

Sections: ``financial``, ``simulation``, ``scenarios`` (vtg in percent, ltp in
percent), ``options``, ``criteria`` (weights), ``sensitivity``, plus top-level
``master_seed`` and ``output_dir``. The full schema with defaults is written
by ``dump_default_config``.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import yaml

from .costs import FinancialParams, OptionSpec, default_options
from .mcda import McdaError, WeightVector, default_weights
from .scenarios import (
    DiscreteDistribution,
    ValidationError,
    default_ltp_distribution,
    default_vtg_distribution,
)
from .sensitivity import DEFAULT_FROZEN, PerturbationConfig
from .weighbridge import ConfigurationError, DelaySpec, SimConfig

__all__ = [
    "ConfigError",
    "PipelineConfig",
    "load_config",
    "parse_config",
    "default_config",
    "config_hash",
    "dump_default_config",
]

VARIANTS = ("selectedCriteria", "allCriteria", "criteriaAndWeights")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    financial: FinancialParams
    simulation: SimConfig
    vtg: DiscreteDistribution
    ltp: DiscreteDistribution
    options: tuple[OptionSpec, ...]
    weights: WeightVector
    sensitivity_amplitude: float
    sensitivity_iterations: int
    sensitivity_variants: tuple[str, ...]
    frozen_criteria: frozenset
    master_seed: int
    output_dir: str

    def sensitivity_config(self, variant: str, seed: int | None = None) -> PerturbationConfig:
        return PerturbationConfig(
            variant=variant,
            amplitude=self.sensitivity_amplitude,
            iterations=self.sensitivity_iterations,
            frozen_criteria=self.frozen_criteria,
            seed=self.master_seed if seed is None else seed,
        )

    def as_dict(self) -> dict:
        """Resolved configuration as plain data (stable key order)."""
        return {
            "master_seed": self.master_seed,
            "output_dir": self.output_dir,
            "financial": dataclasses.asdict(self.financial),
            "simulation": _sim_to_dict(self.simulation),
            "scenarios": {
                "vtg": {
                    "values": [v * 100.0 for v in self.vtg.values],
                    "probabilities": list(self.vtg.probabilities),
                },
                "ltp": {
                    "values": list(self.ltp.values),
                    "probabilities": list(self.ltp.probabilities),
                },
            },
            "options": [dataclasses.asdict(o) for o in self.options],
            "criteria": {"weights": dict(self.weights.weights)},
            "sensitivity": {
                "amplitude": self.sensitivity_amplitude,
                "iterations": self.sensitivity_iterations,
                "variants": list(self.sensitivity_variants),
                "frozen_criteria": sorted(self.frozen_criteria),
            },
        }


def _sim_to_dict(sim: SimConfig) -> dict:
    d = dataclasses.asdict(sim)
    for key in ("pre_weighbridge_travel", "merge_delay"):
        spec = getattr(sim, key)
        d[key] = {"kind": spec.kind, "a": spec.a, "b": spec.b}
    return d


def config_hash(config: PipelineConfig) -> str:
    canonical = json.dumps(config.as_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _expect_mapping(node, path: str) -> dict:
    if node is None:
        return {}
    if not isinstance(node, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(node).__name__}")
    return node


def _take(node: dict, known: set, path: str) -> None:
    unknown = set(node) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")


def _parse_delay(node, path: str) -> DelaySpec:
    if isinstance(node, (int, float)):
        return DelaySpec.fixed(float(node))
    node = _expect_mapping(node, path)
    kind = node.get("kind", "fixed")
    try:
        if kind == "fixed":
            return DelaySpec.fixed(float(node.get("value", node.get("a", 0.0))))
        if kind == "uniform":
            return DelaySpec("uniform", float(node["low"]), float(node["high"]))
        if kind == "normal":
            return DelaySpec("normal", float(node["mean"]), float(node["sd"]))
        if kind == "exponential":
            return DelaySpec("exponential", float(node["mean"]), 0.0)
    except KeyError as exc:
        raise ConfigError(f"{path}: missing {exc.args[0]} for kind {kind!r}") from None
    raise ConfigError(f"{path}.kind: unknown delay kind {kind!r}")


def _parse_distribution(node, path: str, scale: float = 1.0) -> DiscreteDistribution:
    node = _expect_mapping(node, path)
    _take(node, {"values", "probabilities"}, path)
    values = node.get("values")
    probs = node.get("probabilities")
    if values is None or probs is None:
        raise ConfigError(f"{path}: needs both values and probabilities")
    if len(values) != len(probs):
        raise ConfigError(f"{path}: values and probabilities differ in length")
    try:
        return DiscreteDistribution(
            tuple((float(v) * scale, float(p)) for v, p in zip(values, probs))
        )
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_options(node, path: str) -> tuple[OptionSpec, ...]:
    if node is None:
        return default_options()
    if not isinstance(node, list):
        raise ConfigError(f"{path}: expected a list of options")
    out = []
    for i, entry in enumerate(node):
        entry = _expect_mapping(entry, f"{path}[{i}]")
        _take(entry, {"id", "name", "extra_lorry_lane", "extra_non_lorry_lane",
                      "requires_facility_build"}, f"{path}[{i}]")
        try:
            out.append(OptionSpec(
                id=int(entry["id"]),
                name=str(entry.get("name", f"option {entry['id']}")),
                extra_lorry_lane=bool(entry.get("extra_lorry_lane", False)),
                extra_non_lorry_lane=bool(entry.get("extra_non_lorry_lane", False)),
                requires_facility_build=bool(entry.get("requires_facility_build", False)),
            ))
        except (KeyError, ValidationError) as exc:
            raise ConfigError(f"{path}[{i}]: {exc}") from None
    if len({o.id for o in out}) != len(out):
        raise ConfigError(f"{path}: option ids must be unique")
    return tuple(out)


def _build_dataclass(cls, node: dict, path: str, convert=None):
    fields = {f.name for f in dataclasses.fields(cls)}
    _take(node, fields, path)
    kwargs = {}
    for key, value in node.items():
        if convert and key in convert:
            value = convert[key](value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except (ValidationError, ConfigurationError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


def parse_config(document: dict | None) -> PipelineConfig:
    """Build a validated PipelineConfig from parsed YAML (None = defaults)."""
    doc = _expect_mapping(document, "config")
    _take(doc, {"master_seed", "output_dir", "financial", "simulation",
                "scenarios", "options", "criteria", "sensitivity"}, "config")

    financial = _build_dataclass(
        FinancialParams, _expect_mapping(doc.get("financial"), "financial"), "financial"
    )

    sim_node = _expect_mapping(doc.get("simulation"), "simulation")
    sim = _build_dataclass(
        SimConfig, sim_node, "simulation",
        convert={
            "pre_weighbridge_travel": lambda v: _parse_delay(v, "simulation.pre_weighbridge_travel"),
            "merge_delay": lambda v: _parse_delay(v, "simulation.merge_delay"),
        },
    )

    scen = _expect_mapping(doc.get("scenarios"), "scenarios")
    _take(scen, {"vtg", "ltp"}, "scenarios")
    vtg = (_parse_distribution(scen["vtg"], "scenarios.vtg", scale=0.01)
           if "vtg" in scen else default_vtg_distribution())
    ltp = (_parse_distribution(scen["ltp"], "scenarios.ltp")
           if "ltp" in scen else default_ltp_distribution())

    options = _parse_options(doc.get("options"), "options")

    crit = _expect_mapping(doc.get("criteria"), "criteria")
    _take(crit, {"weights"}, "criteria")
    if "weights" in crit:
        w = _expect_mapping(crit["weights"], "criteria.weights")
        try:
            weights = WeightVector({str(k): float(v) for k, v in w.items()})
        except McdaError as exc:
            raise ConfigError(f"criteria.weights: {exc}") from None
        if set(weights.weights) != set(default_weights().weights):
            missing = set(default_weights().weights).symmetric_difference(weights.weights)
            raise ConfigError(f"criteria.weights: criterion ids mismatch: {sorted(missing)}")
    else:
        weights = default_weights()

    sens = _expect_mapping(doc.get("sensitivity"), "sensitivity")
    _take(sens, {"amplitude", "iterations", "variants", "frozen_criteria"}, "sensitivity")
    amplitude = float(sens.get("amplitude", 0.1))
    iterations = int(sens.get("iterations", 10_000))
    variants = tuple(sens.get("variants", VARIANTS))
    for v in variants:
        if v not in VARIANTS:
            raise ConfigError(f"sensitivity.variants: unknown variant {v!r}")
    frozen = frozenset(sens.get("frozen_criteria", DEFAULT_FROZEN))
    if not 0.0 <= amplitude < 1.0:
        raise ConfigError(f"sensitivity.amplitude: {amplitude} not in [0, 1)")
    if iterations < 1:
        raise ConfigError("sensitivity.iterations: must be >= 1")

    return PipelineConfig(
        financial=financial,
        simulation=sim,
        vtg=vtg,
        ltp=ltp,
        options=options,
        weights=weights,
        sensitivity_amplitude=amplitude,
        sensitivity_iterations=iterations,
        sensitivity_variants=variants,
        frozen_criteria=frozen,
        master_seed=int(doc.get("master_seed", 20_100_206)),
        output_dir=str(doc.get("output_dir", "out")),
    )


def load_config(path: str | Path | None) -> PipelineConfig:
    """Parse and validate a YAML configuration file; None loads defaults."""
    if path is None:
        return parse_config(None)
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        document = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path}: {exc}") from None
    return parse_config(document)


def default_config() -> PipelineConfig:
    return parse_config(None)


def dump_default_config(path: str | Path) -> None:
    """Write the fully resolved default configuration as a commented-free YAML."""
    Path(path).write_text(yaml.safe_dump(default_config().as_dict(), sort_keys=False))
