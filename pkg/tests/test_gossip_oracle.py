"""Spreading-time equivalence against an independent breadth-first oracle.

Robots are frozen in place (wheel commands zeroed) so the communication graph
is static: informed times must then match hop-count spreading on the disk
graph exactly, one tick per hop, each node relaying only during its own
broadcast window.
"""

import math

import numpy as np
import pytest

from swarmsearch.config import BehaviorParams, SwarmConfig, WorldConstants
from swarmsearch.geometry import Pose, Vec2
from swarmsearch.simulation import Simulator
from swarmsearch.world import world_from_poses


def spreading_oracle(
    positions: list[tuple[float, float]],
    target_center: tuple[float, float],
    target_radius: float,
    comm_range: float,
    appear_tick: int,
    window_ticks: int,
    horizon: int,
) -> dict[int, int]:
    """Tick-by-tick fixpoint of first-informed times on the static disk graph."""
    n = len(positions)
    adjacency = {
        i: [
            j
            for j in range(n)
            if j != i
            and math.dist(positions[i], positions[j]) <= comm_range
        ]
        for i in range(n)
    }
    informed = {
        i: appear_tick
        for i in range(n)
        if math.dist(positions[i], target_center) <= target_radius
    }
    for t in range(appear_tick, horizon):
        fresh = {}
        for i, t0 in informed.items():
            if t0 <= t < t0 + window_ticks:
                for j in adjacency[i]:
                    if j not in informed and j not in fresh:
                        fresh[j] = t + 1
        informed.update(fresh)
    return informed


def random_static_layout(rng: np.random.Generator, n: int, constants: WorldConstants):
    lo = constants.robot_radius
    hi = constants.arena_side - constants.robot_radius
    positions: list[tuple[float, float]] = []
    while len(positions) < n:
        cand = (float(rng.uniform(lo, hi)), float(rng.uniform(lo, hi)))
        if all(math.dist(cand, p) >= constants.robot_diameter for p in positions):
            positions.append(cand)
    margin = constants.target_radius
    center = (
        float(rng.uniform(margin, constants.arena_side - margin)),
        float(rng.uniform(margin, constants.arena_side - margin)),
    )
    return positions, center


def run_case(rng: np.random.Generator, case_seed: int) -> None:
    n = int(rng.integers(2, 7))
    broadcast = float(rng.choice([0.0, 0.25, 4.0, 8.0, 16.0]))
    constants = WorldConstants(swarm_size=n)
    config = SwarmConfig(
        params=BehaviorParams(speed=10.0, separation=20.0, broadcast=broadcast),
        seed=case_seed,
        world=constants,
    )
    positions, center = random_static_layout(rng, n, constants)
    world = world_from_poses(
        config, [Pose(Vec2(x, y), 0.0) for x, y in positions], Vec2(*center)
    )
    window = constants.to_ticks(broadcast)
    horizon = constants.appear_tick + n + window + 5

    sim = Simulator(config, world=world, motion_enabled=False)
    for _ in range(horizon):
        sim.step()

    expected = spreading_oracle(
        positions,
        center,
        constants.target_radius,
        constants.comm_range,
        constants.appear_tick,
        window,
        horizon,
    )
    actual = {
        i: t for i, t in enumerate(sim.informed_at_ticks()) if t is not None
    }
    assert actual == expected


@pytest.mark.parametrize("case", range(30))
def test_static_spreading_matches_bfs_oracle(case):
    rng = np.random.default_rng(1000 + case)
    run_case(rng, case_seed=case)


def test_two_hop_chain_timing():
    # A-B-C spaced 30 cm, A inside the target: B one hop later, C two.
    constants = WorldConstants(swarm_size=3)
    config = SwarmConfig(
        params=BehaviorParams(speed=10.0, separation=20.0, broadcast=8.0),
        seed=0,
        world=constants,
    )
    poses = [Pose(Vec2(40.0, 75.0), 0.0), Pose(Vec2(70.0, 75.0), 0.0), Pose(Vec2(100.0, 75.0), 0.0)]
    world = world_from_poses(config, poses, Vec2(40.0, 75.0))
    sim = Simulator(config, world=world, motion_enabled=False)
    for _ in range(40):
        sim.step()
    assert sim.informed_at_ticks() == [30, 31, 32]


def test_broadcast_window_exactness():
    # The informed robot relays on exactly ceil(T / tick) consecutive ticks.
    constants = WorldConstants(swarm_size=2)
    config = SwarmConfig(
        params=BehaviorParams(speed=10.0, separation=20.0, broadcast=4.0),
        seed=0,
        world=constants,
    )
    poses = [Pose(Vec2(40.0, 75.0), 0.0), Pose(Vec2(70.0, 75.0), 0.0)]
    world = world_from_poses(config, poses, Vec2(40.0, 75.0))
    sim = Simulator(config, world=world, motion_enabled=False)
    received_from_a = 0
    for _ in range(150):
        sim.step()
        received_from_a += sum(
            1 for msg in sim.world.inboxes[1] if msg.sender_id == 0
        )
    assert received_from_a == constants.to_ticks(4.0) == 40


def test_zero_window_never_delivers():
    constants = WorldConstants(swarm_size=2)
    config = SwarmConfig(
        params=BehaviorParams(speed=10.0, separation=20.0, broadcast=0.0),
        seed=0,
        world=constants,
    )
    poses = [Pose(Vec2(40.0, 75.0), 0.0), Pose(Vec2(70.0, 75.0), 0.0)]
    world = world_from_poses(config, poses, Vec2(40.0, 75.0))
    sim = Simulator(config, world=world, motion_enabled=False)
    for _ in range(100):
        sim.step()
    assert sim.messages_delivered == 0
    assert sim.informed_at_ticks() == [30, None]
