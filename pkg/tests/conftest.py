import math

import hypothesis
import pytest

from swarmsearch.config import BehaviorParams, SwarmConfig, WorldConstants
from swarmsearch.geometry import Pose, Vec2
from swarmsearch.world import world_from_poses

hypothesis.settings.register_profile(
    "default", max_examples=50, deadline=None, derandomize=True
)
hypothesis.settings.load_profile("default")


def ring_poses(center: Vec2, radius: float, n: int = 10, heading: float = 0.0) -> list[Pose]:
    """n poses evenly spaced on a circle; spacing must respect non-penetration."""
    poses = []
    for k in range(n):
        ang = 2.0 * math.pi * k / n
        poses.append(
            Pose(Vec2(center.x + radius * math.cos(ang), center.y + radius * math.sin(ang)), heading)
        )
    return poses


def line_poses(start: Vec2, spacing: float, n: int, heading: float = 0.0) -> list[Pose]:
    return [Pose(Vec2(start.x + k * spacing, start.y), heading) for k in range(n)]


@pytest.fixture
def params():
    return BehaviorParams(speed=10.0, separation=20.0, broadcast=8.0)


@pytest.fixture
def constants():
    return WorldConstants()


def make_config(
    speed=10.0, separation=20.0, broadcast=8.0, seed=0, swarm_size=10, max_trial_duration=180.0
) -> SwarmConfig:
    return SwarmConfig(
        params=BehaviorParams(speed=speed, separation=separation, broadcast=broadcast),
        seed=seed,
        max_trial_duration=max_trial_duration,
        world=WorldConstants(swarm_size=swarm_size),
    )


def scripted_world(config: SwarmConfig, poses, target_center: Vec2):
    return world_from_poses(config, poses, target_center)
