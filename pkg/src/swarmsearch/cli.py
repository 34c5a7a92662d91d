"""Command line entry points: trial, sweep, analyze, serve."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import BehaviorParams, SwarmConfig, full_grid
from .harness import (
    custom_grid,
    fit_performance_model,
    load_results_csv,
    run_sweep,
    run_trial,
)


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmsearch")
    sub = parser.add_subparsers(dest="command", required=True)

    trial = sub.add_parser("trial", help="run a single headless trial")
    trial.add_argument("--speed", type=float, required=True, help="robot speed v in cm/s")
    trial.add_argument("--separation", type=float, required=True, help="desired separation d in cm")
    trial.add_argument("--broadcast", type=float, required=True, help="broadcast duration T in s")
    trial.add_argument("--seed", type=int, required=True)
    trial.add_argument("--max-duration", type=float, default=180.0, help="trial cap in seconds")
    trial.add_argument("--record", metavar="TRAJ_JSONL", help="write per-tick trajectory frames")

    sweep = sub.add_parser("sweep", help="run the parameter-grid experiment")
    sweep.add_argument("--grid", choices=["paper", "custom"], default="paper")
    sweep.add_argument("--seeds", type=int, required=True, help="trials per configuration")
    sweep.add_argument("--master-seed", type=int, required=True)
    sweep.add_argument("--out", required=True, help="results CSV path (resumable)")
    sweep.add_argument("--workers", type=int, default=None, help="process pool size")
    sweep.add_argument("--max-duration", type=float, default=180.0)
    sweep.add_argument("--speeds", type=_float_list, help="custom grid speeds, comma separated")
    sweep.add_argument("--separations", type=_float_list, help="custom grid separations")
    sweep.add_argument("--broadcasts", type=_float_list, help="custom grid broadcast durations")

    analyze = sub.add_parser("analyze", help="summarize a results CSV")
    analyze.add_argument("--in", dest="input", required=True)
    analyze.add_argument("--censor-at", type=float, default=180.0)

    serve = sub.add_parser("serve", help="run the operator session server")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--teams", help="teams.json catalog for study-mode sessions")
    serve.add_argument("--data-dir", required=True, help="session persistence directory")
    serve.add_argument("--ui-dir", help="serve a built operator UI from this directory at /ui")
    serve.add_argument(
        "--hide-target-until-informed",
        action="store_true",
        help="show the target to the operator only after their robot learns of it",
    )

    return parser


def _cmd_trial(args: argparse.Namespace) -> int:
    config = SwarmConfig(
        params=BehaviorParams(
            speed=args.speed, separation=args.separation, broadcast=args.broadcast
        ),
        seed=args.seed,
        max_trial_duration=args.max_duration,
    )
    result = run_trial(config, record_path=args.record)
    if result.completion_s is None:
        print(f"{result.config_id} seed={result.seed}: timeout after {args.max_duration:g} s")
    else:
        print(f"{result.config_id} seed={result.seed}: completed in {result.completion_s:.1f} s")
    informed = sum(1 for t in result.informed_at if t is not None)
    print(f"informed robots: {informed}/10, messages delivered: {result.messages_delivered}")
    if args.record:
        print(f"trajectory written to {args.record}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.grid == "paper":
        grid = full_grid()
    else:
        if not (args.speeds and args.separations and args.broadcasts):
            print("custom grid needs --speeds, --separations and --broadcasts", file=sys.stderr)
            return 2
        grid = custom_grid(args.speeds, args.separations, args.broadcasts)
    results = run_sweep(
        grid,
        seeds_per_config=args.seeds,
        master_seed=args.master_seed,
        out_path=args.out,
        workers=args.workers,
        max_trial_duration=args.max_duration,
    )
    timeouts = sum(1 for r in results if r.timed_out)
    print(f"{len(results)} trials written to {args.out} ({timeouts} timeouts)")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    results = load_results_csv(args.input)
    summary = fit_performance_model(results, censor_at=args.censor_at)
    print(summary.table())
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server.app import create_app

    logging.basicConfig(level=logging.INFO)
    app = create_app(
        data_dir=args.data_dir,
        teams_path=args.teams,
        ui_dir=args.ui_dir,
        target_visible_on_appearance=not args.hide_target_until_informed,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "trial": _cmd_trial,
        "sweep": _cmd_sweep,
        "analyze": _cmd_analyze,
        "serve": _cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
