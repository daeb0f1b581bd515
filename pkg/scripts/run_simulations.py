#!/usr/bin/env python3
"""Run the full simulation grid and write one CSV row per scenario/mechanism.

Examples:
    python3 scripts/run_simulations.py --out results.csv
    python3 scripts/run_simulations.py --trials 200 --regime balanced --out balanced.csv
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from major_transition.sim import REGIMES, default_grid, run_scenario_suite, write_results_csv


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=1000, help="trials per scenario cell")
    parser.add_argument("--seed", type=int, default=17, help="master seed for the suite")
    parser.add_argument(
        "--regime",
        choices=REGIMES,
        action="append",
        help="restrict to one constraint regime (repeatable; default: all)",
    )
    parser.add_argument(
        "--dump-dir",
        type=Path,
        default=None,
        help="directory for dumping trials where the two composites disagree",
    )
    parser.add_argument("--out", type=Path, default=None, help="CSV output path (default: stdout)")
    args = parser.parse_args(argv)

    regimes = tuple(args.regime) if args.regime else REGIMES
    configs = default_grid(trials=args.trials, master_seed=args.seed, regimes=regimes)
    started = time.perf_counter()
    results = run_scenario_suite(configs, dump_dir=args.dump_dir)
    elapsed = time.perf_counter() - started

    if args.out is None:
        write_results_csv(results, sys.stdout)
    else:
        write_results_csv(results, args.out)
        print(f"wrote {len(results)} scenarios to {args.out}", file=sys.stderr)
    mismatched = [r.config.label for r in results if r.mismatch_trials]
    if mismatched:
        print(f"composite mismatches in: {', '.join(mismatched)}", file=sys.stderr)
    print(f"finished in {elapsed:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
