#!/usr/bin/env python3
"""Record a demo trajectory (traj.jsonl) for replaying in the operator UI."""

import argparse

from swarmsearch.config import BehaviorParams, SwarmConfig
from swarmsearch.harness import run_trial


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--speed", type=float, default=12.5)
    parser.add_argument("--separation", type=float, default=20.0)
    parser.add_argument("--broadcast", type=float, default=8.0)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--out", default="demo_traj.jsonl")
    args = parser.parse_args()

    config = SwarmConfig(
        params=BehaviorParams(args.speed, args.separation, args.broadcast), seed=args.seed
    )
    result = run_trial(config, record_path=args.out)
    outcome = "timed out" if result.completion_s is None else f"completed in {result.completion_s:.1f} s"
    print(f"{result.config_id} seed={args.seed}: {outcome}; frames in {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
