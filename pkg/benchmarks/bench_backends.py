"""Compare the compiled weighbridge kernel against the pure-Python backend.

Runs the most congested cell (option 1, scenario 9) for a configurable number
of simulated days on both backends, checks the tallies are bit-identical, and
reports the throughput ratio.

Usage: python benchmarks/bench_backends.py [--days N] [--replications R]
"""

import argparse
import time

from dovermcda import weighbridge as wb
from dovermcda.costs import default_options
from dovermcda.scenarios import (
    build_scenario_set,
    default_ltp_distribution,
    default_vtg_distribution,
)


def run(backend: str, option, scenario, config, seed: int):
    t0 = time.perf_counter()
    stats = wb.simulate_replicated(option, scenario, config, seed, backend=backend)
    return stats, time.perf_counter() - t0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--days", type=int, default=30)
    parser.add_argument("--replications", type=int, default=5)
    parser.add_argument("--seed", type=int, default=20_100_206)
    args = parser.parse_args()

    if "kernel" not in wb.available_backends():
        print("compiled kernel not built; nothing to compare")
        return 1

    config = wb.SimConfig(run_days=args.days, warmup_days=min(5, args.days - 1),
                          replications=args.replications)
    option = default_options()[0]
    tree = build_scenario_set(default_vtg_distribution(), default_ltp_distribution())
    scenario = tree.by_id(9)

    customers = args.replications * args.days * 86400 * 4.57 / 60 * (1 + scenario.vtg)
    print(f"cell: option {option.id}, scenario {scenario.id} "
          f"({args.replications} replications x {args.days} days, "
          f"~{customers:,.0f} customers)")

    kernel_stats, kernel_s = run("kernel", option, scenario, config, args.seed)
    pure_stats, pure_s = run("pure", option, scenario, config, args.seed)

    identical = kernel_stats == pure_stats
    print(f"kernel: {kernel_s:8.3f} s   ({customers / kernel_s:12,.0f} customers/s)")
    print(f"pure:   {pure_s:8.3f} s   ({customers / pure_s:12,.0f} customers/s)")
    print(f"speedup: {pure_s / kernel_s:.1f}x   bit-identical results: {identical}")
    print(f"queue {kernel_stats.queue_pct:.2f}%  passive {kernel_stats.passive_pct:.2f}%  "
          f"dissatisfaction {kernel_stats.dissat_pct:.2f}%")
    return 0 if identical else 2


if __name__ == "__main__":
    raise SystemExit(main())
