import numpy as np
import pytest

from swarmsearch.config import full_grid
from swarmsearch.harness import (
    TrialResult,
    custom_grid,
    fit_performance_model,
    load_results_csv,
    run_sweep,
    run_trial,
    sweep_specs,
    write_results_csv,
)

from conftest import make_config


def small_grid():
    return custom_grid([7.5, 15.0], [12.0], [0.0, 8.0])


def test_full_grid_has_125_configurations():
    grid = full_grid()
    assert len(grid) == 125
    assert len({p.config_id for p in grid}) == 125


def test_run_trial_deterministic():
    config = make_config(seed=77, max_trial_duration=30.0)
    assert run_trial(config) == run_trial(config)


def test_trial_result_invariants():
    config = make_config(seed=5, speed=15.0, broadcast=8.0)
    result = run_trial(config)
    assert result.completion_s is not None
    assert result.completion_s >= 3.0
    entries = [t for t in result.entry_at if t is not None]
    assert len(entries) == 10
    assert result.completion_s >= max(entries)
    for informed, entry in zip(result.informed_at, result.entry_at):
        if informed is not None and entry is not None:
            # a robot inside the region knows the target, so it cannot have
            # entered before hearing of it unless it discovered it right there
            assert entry >= min(informed, entry)


def test_trial_records_trajectory(tmp_path):
    config = make_config(seed=2, max_trial_duration=5.0)
    path = tmp_path / "traj.jsonl"
    run_trial(config, record_path=path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 51  # initial frame + one per tick


def test_sweep_specs_are_reproducible():
    a = sweep_specs(small_grid(), seeds_per_config=3, master_seed=11)
    b = sweep_specs(small_grid(), seeds_per_config=3, master_seed=11)
    assert a == b
    c = sweep_specs(small_grid(), seeds_per_config=3, master_seed=12)
    assert [s.config.seed for s in a] != [s.config.seed for s in c]


def test_sweep_cardinality_for_subset_grid(tmp_path):
    grid = custom_grid([5.0], [4.0, 12.0, 20.0, 28.0, 36.0], [0.0, 4.0, 8.0, 12.0, 16.0])
    assert len(grid) == 25
    results = run_sweep(
        grid, seeds_per_config=1, master_seed=1, out_path=tmp_path / "r.csv",
        workers=1, max_trial_duration=4.0,
    )
    assert len(results) == 25
    assert len((tmp_path / "r.csv").read_text().strip().splitlines()) == 26


def test_sweep_bytes_identical_across_runs(tmp_path):
    kwargs = dict(
        grid=small_grid(), seeds_per_config=2, master_seed=42,
        workers=1, max_trial_duration=20.0,
    )
    run_sweep(out_path=tmp_path / "a.csv", **kwargs)
    run_sweep(out_path=tmp_path / "b.csv", **kwargs)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_sweep_resumes_without_changing_bytes(tmp_path):
    kwargs = dict(grid=small_grid(), master_seed=42, workers=1, max_trial_duration=20.0)
    run_sweep(out_path=tmp_path / "partial.csv", seeds_per_config=1, **kwargs)
    resumed = run_sweep(out_path=tmp_path / "partial.csv", seeds_per_config=2, **kwargs)
    fresh = run_sweep(out_path=tmp_path / "fresh.csv", seeds_per_config=2, **kwargs)
    assert [r.seed for r in resumed] == [r.seed for r in fresh]
    assert (tmp_path / "partial.csv").read_bytes() == (tmp_path / "fresh.csv").read_bytes()


def test_results_csv_round_trip(tmp_path):
    results = run_sweep(
        small_grid(), seeds_per_config=1, master_seed=9,
        out_path=tmp_path / "r.csv", workers=1, max_trial_duration=20.0,
    )
    loaded = load_results_csv(tmp_path / "r.csv")
    assert len(loaded) == len(results)
    for ours, theirs in zip(results, loaded):
        assert ours.config_id == theirs.config_id
        assert ours.seed == theirs.seed
        assert ours.completion_s == theirs.completion_s
        assert ours.informed_at == theirs.informed_at
        assert ours.entry_at == theirs.entry_at


def test_csv_header_matches_documented_schema(tmp_path):
    run_sweep(
        small_grid(), seeds_per_config=1, master_seed=9,
        out_path=tmp_path / "r.csv", workers=1, max_trial_duration=20.0,
    )
    header = (tmp_path / "r.csv").read_text().splitlines()[0]
    assert header == (
        "config_id,speed_cmps,separation_cm,broadcast_s,seed,completion_s,"
        + ",".join(f"informed_at_{i}" for i in range(10)) + ","
        + ",".join(f"entry_at_{i}" for i in range(10))
    )


def _fake_result(config_id, speed, separation, broadcast, seed, completion):
    return TrialResult(
        config_id=config_id,
        speed=speed,
        separation=separation,
        broadcast=broadcast,
        seed=seed,
        completion_s=completion,
        informed_at=tuple([None] * 10),
        entry_at=tuple([None] * 10),
    )


def test_fit_reports_timeouts_and_censors():
    rng = np.random.default_rng(0)
    results = []
    for i, v in enumerate((5.0, 15.0)):
        for j, d in enumerate((4.0, 36.0)):
            for k, T in enumerate((0.0, 16.0)):
                for rep in range(5):
                    completion = None if (v, T, rep) == (5.0, 0.0, 0) else float(
                        rng.uniform(20.0, 100.0)
                    )
                    results.append(
                        _fake_result(f"v{v:g}-d{d:g}-T{T:g}", v, d, T, rep, completion)
                    )
    summary = fit_performance_model(results, censor_at=180.0)
    assert summary.n_trials == 40
    assert summary.n_timeouts == 2
    assert summary.completion_max == 180.0
    assert "timeouts: 2" in summary.table()


def test_fit_requires_two_levels_per_parameter():
    results = [
        _fake_result("v5-d4-T0", 5.0, 4.0, 0.0, rep, 50.0) for rep in range(10)
    ]
    with pytest.raises(ValueError, match="two distinct"):
        fit_performance_model(results)


def test_fit_recovers_known_dependence():
    # Synthetic completion = 120 - 4 v + noise: only speed matters.
    rng = np.random.default_rng(1)
    results = []
    for v in (5.0, 7.5, 10.0, 12.5, 15.0):
        for d in (4.0, 20.0, 36.0):
            for T in (0.0, 8.0, 16.0):
                for rep in range(4):
                    y = 120.0 - 4.0 * v + float(rng.normal(scale=0.5))
                    results.append(_fake_result(f"v{v:g}-d{d:g}-T{T:g}", v, d, T, rep, y))
    summary = fit_performance_model(results)
    reg = {est.name: est for est in summary.regression.estimates}
    assert reg["speed"].p_value < 1e-6
    assert reg["separation"].p_value > 0.05
    assert reg["broadcast"].p_value > 0.05
    # Standardized speed coefficient: -4 * population SD of the speed levels.
    speeds = np.array([r.speed for r in results])
    assert reg["speed"].coefficient == pytest.approx(-4.0 * speeds.std(), rel=0.01)


def test_faster_swarms_finish_sooner_at_middle_levels():
    # Sanity monotonicity at the envelope: v = 15 beats v = 5 with d and T at
    # their middle levels, averaged over 30 seeds.
    def mean_completion(speed):
        vals = []
        for rep in range(30):
            config = make_config(
                speed=speed, separation=20.0, broadcast=8.0, seed=50_000 + rep
            )
            r = run_trial(config)
            vals.append(180.0 if r.completion_s is None else r.completion_s)
        return float(np.mean(vals))

    assert mean_completion(15.0) < mean_completion(5.0)


def test_write_results_is_atomic(tmp_path):
    results = [_fake_result("v5-d4-T0", 5.0, 4.0, 0.0, 1, 10.0)]
    out = tmp_path / "sub" / "r.csv"
    write_results_csv(results, out)
    assert out.exists()
    assert not list(out.parent.glob("*.tmp"))
