#!/usr/bin/env python3
"""Run the full 125-configuration sweep and print the performance analysis.

Writes results.csv next to this script by default; the run is resumable, so
an interrupted sweep picks up where it left off.
"""

import argparse
from pathlib import Path

from swarmsearch.config import full_grid
from swarmsearch.harness import fit_performance_model, run_sweep


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=10, help="trials per configuration")
    parser.add_argument("--master-seed", type=int, default=20260809)
    parser.add_argument("--out", default=str(Path(__file__).parent / "results.csv"))
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()

    results = run_sweep(
        full_grid(),
        seeds_per_config=args.seeds,
        master_seed=args.master_seed,
        out_path=args.out,
        workers=args.workers,
    )
    summary = fit_performance_model(results)
    print(summary.table())
    print()
    worst = max(summary.per_config, key=lambda c: c.mean)
    best = min(summary.per_config, key=lambda c: c.mean)
    print(f"fastest config: {best.config_id} (mean {best.mean:.1f} s over {best.n} trials)")
    print(f"slowest config: {worst.config_id} (mean {worst.mean:.1f} s over {worst.n} trials)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
