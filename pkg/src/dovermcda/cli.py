"""Command-line interface.

Subcommands mirror the pipeline stages: ``simulate`` runs the traffic model,
``score`` builds the score tables and rankings, ``sensitivity`` the
robustness analysis, ``pipeline`` everything end to end, and ``serve`` starts
the what-if HTTP service. Exit codes: 0 success, 1 configuration or
validation problem, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .mcda import McdaError
from .pipeline import (
    PipelineError,
    baseline_simulation_table,
    load_simulation_table,
    run_pipeline,
)
from .scenarios import ValidationError, build_scenario_set
from .weighbridge import ConfigurationError, active_backend, available_backends

USAGE_ERRORS = (ConfigError, ConfigurationError, ValidationError, McdaError, ValueError)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="YAML configuration file")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--replications", type=int, help="override simulation replications")
    parser.add_argument("--days", type=int, help="override simulated days")
    parser.add_argument("--paper-scale", action="store_true",
                        help="full-scale simulation: 365 days, 20 warmup, 10000 replications")
    parser.add_argument("--backend", choices=["kernel", "pure"],
                        help="force a simulation backend")
    parser.add_argument(
        "--bypass-simulation", metavar="TABLE", nargs="?", const="baseline",
        help="skip the simulation and inject a per-scenario statistics table "
             "(CSV path, or no value for the bundled case-study table)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dovermcda",
        description="Simulation-guided multi-criteria decision analysis "
                    "for the Port of Dover expansion case study.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the weighbridge simulation table")
    _add_common(p)

    p = sub.add_parser("score", help="score tables and rankings (CBA, static, dynamic)")
    _add_common(p)

    p = sub.add_parser("sensitivity", help="Monte-Carlo ranking robustness")
    _add_common(p)
    p.add_argument("--variant", choices=["selectedCriteria", "allCriteria", "criteriaAndWeights"],
                   action="append", help="variant to run (repeatable; default: all)")
    p.add_argument("--iterations", type=int, help="override iteration count")

    p = sub.add_parser("pipeline", help="run every stage end to end")
    _add_common(p)

    p = sub.add_parser("serve", help="run the what-if HTTP service")
    _add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--frontend", metavar="DIR", help="built UI directory to serve at /")

    return parser


def _resolve_config(args):
    config = load_config(args.config)
    sim = config.simulation
    if args.paper_scale:
        sim = sim.paper_scale()
    if args.replications is not None:
        sim = dataclasses.replace(sim, replications=args.replications)
    if args.days is not None:
        warmup = sim.warmup_days
        if warmup >= args.days:
            # keep the desk-scale warmup share when shrinking the horizon
            warmup = max(0, args.days // 6)
            print(f"note: warmup shortened to {warmup} day(s) for a {args.days}-day run")
        sim = dataclasses.replace(sim, run_days=args.days, warmup_days=warmup)
    if sim is not config.simulation:
        config = dataclasses.replace(config, simulation=sim)
    if args.seed is not None:
        config = dataclasses.replace(config, master_seed=args.seed)
    if args.out is not None:
        config = dataclasses.replace(config, output_dir=args.out)
    return config


def _resolve_bypass(args, config):
    if args.bypass_simulation is None:
        return None
    scenario_set = build_scenario_set(config.vtg, config.ltp)
    option_ids = [o.id for o in config.options]
    if args.bypass_simulation == "baseline":
        return baseline_simulation_table(scenario_set, option_ids)
    return load_simulation_table(args.bypass_simulation, scenario_set, option_ids)


def _apply_backend(args) -> None:
    if args.backend:
        import os

        os.environ["DOVERMCDA_BACKEND"] = args.backend
        if args.backend not in available_backends():
            raise ConfigError(f"backend {args.backend!r} not available")


def _print_rankings(artifact) -> None:
    for method in ("cba", "staticMcda", "dynamicMcda"):
        r = artifact.rankings[method]
        totals = ", ".join(f"option {oid}: {r.totals[oid]:,.2f}" for oid in sorted(r.totals))
        print(f"{method:12s} winner: option {r.order[0]}   ({totals})")


def _run(args) -> int:
    _apply_backend(args)
    config = _resolve_config(args)
    bypass = _resolve_bypass(args, config)

    if args.command == "simulate":
        if bypass is not None:
            raise ConfigError("simulate: --bypass-simulation makes no sense here")
        print(f"simulating with backend {active_backend()!r} "
              f"({config.simulation.replications} replications x {config.simulation.run_days} days)")
        artifact = run_pipeline(config, write=True)
        out = Path(config.output_dir)
        print(f"wrote {out / 'simulation.csv'} and {out / 'artifact.json'}")
        for oid, st in sorted(artifact.simulation.expected.items()):
            print(f"option {oid}: queue {st.queue_pct:.2f}%  passive {st.passive_pct:.2f}%  "
                  f"dissatisfaction {st.dissat_pct:.2f}%")
        return 0

    if args.command in ("score", "pipeline", "sensitivity"):
        artifact = run_pipeline(config, bypass_table=bypass, write=True)
        out = Path(config.output_dir)
        if args.command == "sensitivity":
            variants = args.variant or list(config.sensitivity_variants)
            for variant in variants:
                rep = artifact.sensitivity.get(variant)
                if rep is None or (args.iterations and rep.iterations != args.iterations):
                    from .sensitivity import run_analysis

                    cfg = config.sensitivity_config(variant)
                    if args.iterations:
                        cfg = dataclasses.replace(cfg, iterations=args.iterations)
                    rep = run_analysis(artifact.normalized_matrix, config.weights, cfg)
                freqs = ", ".join(
                    f"option {oid}: {pct:.1f}%" for oid, pct in sorted(rep.top_rank_frequency.items())
                )
                print(f"{variant:20s} top-rank frequencies: {freqs}")
        else:
            _print_rankings(artifact)
        print(f"artifacts in {out}/ (config hash {artifact.provenance['config_hash']})")
        return 0

    if args.command == "serve":
        from .service import serve

        artifact = run_pipeline(config, bypass_table=bypass, write=False)
        frontend = args.frontend
        if frontend is None:
            candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
            frontend = candidate if candidate.is_dir() else None
        print(f"serving on http://{args.host}:{args.port} "
              f"(config hash {artifact.provenance['config_hash']})")
        serve(artifact, host=args.host, port=args.port, frontend_dir=frontend)
        return 0

    raise ConfigError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 2


if __name__ == "__main__":
    sys.exit(main())
