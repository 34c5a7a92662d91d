"""Headless experiment runner: single trials, grid sweeps, performance regression.

A sweep is a pure function of (grid, seeds per config, master seed): trial
seeds are derived by stable mixing, trials may run on a process pool, and the
result file is always written in canonical order through an atomic replace, so
output bytes never depend on scheduling or on whether a run was resumed.
"""

from __future__ import annotations

import csv
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import BehaviorParams, SwarmConfig, full_grid
from .rng import derive_seed
from .simulation import Simulator, TrajectoryWriter
from .stats import OlsFit, ols_fit, zscore

CSV_COLUMNS = (
    ["config_id", "speed_cmps", "separation_cm", "broadcast_s", "seed", "completion_s"]
    + [f"informed_at_{i}" for i in range(10)]
    + [f"entry_at_{i}" for i in range(10)]
)


@dataclass(frozen=True)
class TrialResult:
    config_id: str
    speed: float
    separation: float
    broadcast: float
    seed: int
    completion_s: float | None  # None = timeout
    informed_at: tuple[float | None, ...]
    entry_at: tuple[float | None, ...]
    messages_delivered: int = 0

    @property
    def timed_out(self) -> bool:
        return self.completion_s is None


def run_trial(config: SwarmConfig, record_path: str | Path | None = None) -> TrialResult:
    """Run one fully autonomous trial to completion or to the duration cap."""
    sim = Simulator(config)
    if record_path is not None:
        with open(record_path, "w", encoding="utf-8") as fh:
            writer = TrajectoryWriter(fh)
            writer.write(sim.world)
            sim.run(config.max_trial_ticks, on_tick=lambda res: writer.write(res.world))
    else:
        sim.run(config.max_trial_ticks)

    w = config.world
    completion = sim.world.completed_at
    informed = tuple(
        None if t is None else w.seconds(t) for t in sim.informed_at_ticks()
    )
    entries = tuple(None if t is None else w.seconds(t) for t in sim.first_entry_tick)
    return TrialResult(
        config_id=config.config_id,
        speed=config.params.speed,
        separation=config.params.separation,
        broadcast=config.params.broadcast,
        seed=config.seed,
        completion_s=completion,
        informed_at=informed,
        entry_at=entries,
        messages_delivered=sim.messages_delivered,
    )


# -- sweep -------------------------------------------------------------------


@dataclass(frozen=True)
class TrialSpec:
    order: tuple[int, int]  # (config index, repetition)
    config: SwarmConfig


def sweep_specs(
    grid: Sequence[BehaviorParams],
    seeds_per_config: int,
    master_seed: int,
    max_trial_duration: float = 180.0,
) -> list[TrialSpec]:
    if seeds_per_config < 1:
        raise ValueError("seeds_per_config must be at least 1")
    specs = []
    for ci, params in enumerate(grid):
        for rep in range(seeds_per_config):
            seed = derive_seed(master_seed, ci, rep)
            specs.append(
                TrialSpec(
                    order=(ci, rep),
                    config=SwarmConfig(
                        params=params, seed=seed, max_trial_duration=max_trial_duration
                    ),
                )
            )
    return specs


def _run_spec(spec: TrialSpec) -> tuple[tuple[int, int], TrialResult]:
    return spec.order, run_trial(spec.config)


def _fmt_time(value: float | None) -> str:
    return "" if value is None else f"{value:.1f}"


def write_results_csv(results: Iterable[TrialResult], path: str | Path) -> None:
    """Write the full result set atomically (temp file + rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in results:
                writer.writerow(
                    [
                        r.config_id,
                        f"{r.speed:g}",
                        f"{r.separation:g}",
                        f"{r.broadcast:g}",
                        str(r.seed),
                        _fmt_time(r.completion_s),
                    ]
                    + [_fmt_time(t) for t in r.informed_at]
                    + [_fmt_time(t) for t in r.entry_at]
                )
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def load_results_csv(path: str | Path) -> list[TrialResult]:
    results = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            results.append(
                TrialResult(
                    config_id=row["config_id"],
                    speed=float(row["speed_cmps"]),
                    separation=float(row["separation_cm"]),
                    broadcast=float(row["broadcast_s"]),
                    seed=int(row["seed"]),
                    completion_s=float(row["completion_s"]) if row["completion_s"] else None,
                    informed_at=tuple(
                        float(row[f"informed_at_{i}"]) if row[f"informed_at_{i}"] else None
                        for i in range(10)
                    ),
                    entry_at=tuple(
                        float(row[f"entry_at_{i}"]) if row[f"entry_at_{i}"] else None
                        for i in range(10)
                    ),
                )
            )
    return results


def run_sweep(
    grid: Sequence[BehaviorParams],
    seeds_per_config: int,
    master_seed: int,
    out_path: str | Path,
    workers: int | None = None,
    max_trial_duration: float = 180.0,
) -> list[TrialResult]:
    """Run (or resume) a sweep and write results.csv in canonical order.

    Rows already present in out_path (matched by config id and seed) are kept
    as-is and not recomputed.
    """
    out_path = Path(out_path)
    specs = sweep_specs(grid, seeds_per_config, master_seed, max_trial_duration)

    done: dict[tuple[str, int], TrialResult] = {}
    if out_path.exists():
        for r in load_results_csv(out_path):
            done[(r.config_id, r.seed)] = r

    pending = [s for s in specs if (s.config.config_id, s.config.seed) not in done]
    computed: dict[tuple[int, int], TrialResult] = {}
    if pending:
        if workers is None:
            workers = os.cpu_count() or 1
        if workers > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for order, result in pool.map(_run_spec, pending, chunksize=4):
                    computed[order] = result
        else:
            for spec in pending:
                order, result = _run_spec(spec)
                computed[order] = result

    ordered: list[TrialResult] = []
    for spec in specs:
        key = (spec.config.config_id, spec.config.seed)
        ordered.append(computed.get(spec.order) or done[key])
    write_results_csv(ordered, out_path)
    return ordered


# -- analysis ----------------------------------------------------------------


@dataclass(frozen=True)
class ConfigSummary:
    config_id: str
    n: int
    mean: float
    min: float
    max: float


@dataclass(frozen=True)
class SweepSummary:
    n_trials: int
    n_timeouts: int
    censor_at: float
    completion_min: float
    completion_max: float
    completion_mean: float
    per_config: tuple[ConfigSummary, ...]
    config_mean_min: float
    config_mean_max: float
    grand_mean: float  # mean of per-config mean completion times
    regression: OlsFit

    def table(self) -> str:
        lines = [
            f"trials: {self.n_trials}  timeouts: {self.n_timeouts} "
            f"(censored at {self.censor_at:g} s)",
            f"completion min/mean/max: "
            f"{self.completion_min:.1f} / {self.completion_mean:.1f} / {self.completion_max:.1f} s",
            f"per-config means: min {self.config_mean_min:.1f} s, "
            f"max {self.config_mean_max:.1f} s, grand mean {self.grand_mean:.1f} s",
            "",
            f"{'predictor':<12}{'coef':>10}{'SE':>10}{'t':>10}{'p':>12}",
        ]
        for est in self.regression.estimates:
            lines.append(
                f"{est.name:<12}{est.coefficient:>10.3f}{est.standard_error:>10.3f}"
                f"{est.t_statistic:>10.2f}{est.p_value:>12.4g}"
            )
        return "\n".join(lines)


def fit_performance_model(
    results: Sequence[TrialResult], censor_at: float = 180.0
) -> SweepSummary:
    """OLS of completion time on standardized (speed, separation, broadcast).

    Timeouts are censored at the duration cap and included at that value, and
    their count is always reported. Requires at least two distinct levels per
    parameter.
    """
    if not results:
        raise ValueError("no results to analyze")
    for name in ("speed", "separation", "broadcast"):
        if len({getattr(r, name) for r in results}) < 2:
            raise ValueError(f"need at least two distinct {name} levels")

    y = np.array(
        [censor_at if r.completion_s is None else r.completion_s for r in results]
    )
    X = np.column_stack(
        [
            zscore(np.array([r.speed for r in results])),
            zscore(np.array([r.separation for r in results])),
            zscore(np.array([r.broadcast for r in results])),
        ]
    )
    fit = ols_fit(X, y, names=["speed", "separation", "broadcast"])

    by_config: dict[str, list[float]] = {}
    for r, value in zip(results, y):
        by_config.setdefault(r.config_id, []).append(float(value))
    per_config = tuple(
        ConfigSummary(
            config_id=cid,
            n=len(vals),
            mean=float(np.mean(vals)),
            min=min(vals),
            max=max(vals),
        )
        for cid, vals in sorted(by_config.items())
    )
    config_means = [c.mean for c in per_config]

    return SweepSummary(
        n_trials=len(results),
        n_timeouts=sum(1 for r in results if r.timed_out),
        censor_at=censor_at,
        completion_min=float(y.min()),
        completion_max=float(y.max()),
        completion_mean=float(y.mean()),
        per_config=per_config,
        config_mean_min=min(config_means),
        config_mean_max=max(config_means),
        grand_mean=float(np.mean(config_means)),
        regression=fit,
    )



def custom_grid(
    speeds: Sequence[float], separations: Sequence[float], broadcasts: Sequence[float]
) -> tuple[BehaviorParams, ...]:
    return tuple(
        BehaviorParams(speed=v, separation=d, broadcast=t)
        for v in speeds
        for d in separations
        for t in broadcasts
    )
