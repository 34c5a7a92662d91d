"""Configuration records: fixed world constants, behavior parameters, trial configs.

All lengths are centimeters, durations seconds, angles radians. The behavior
parameter grids are the five-level grids used throughout the experiments;
`BehaviorParams` itself accepts any sane values so tests and custom sweeps can
go off-grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

SPEED_LEVELS = (5.0, 7.5, 10.0, 12.5, 15.0)  # cm/s
SEPARATION_LEVELS = (4.0, 12.0, 20.0, 28.0, 36.0)  # cm
BROADCAST_LEVELS = (0.0, 4.0, 8.0, 12.0, 16.0)  # s


class ConfigError(ValueError):
    """Raised for configuration values that violate a documented invariant."""


@dataclass(frozen=True)
class WorldConstants:
    """Arena, robot, sensing and timing constants shared by every trial."""

    arena_side: float = 150.0
    robot_diameter: float = 7.0
    comm_range: float = 36.0  # center-to-center
    proximity_range: float = 10.0
    proximity_sensor_count: int = 8
    target_radius: float = 25.0
    target_appear_time: float = 3.0
    swarm_size: int = 10
    tick_duration: float = 0.1
    angular_speed: float = math.pi  # rad/s for rotation in place
    overlap_tolerance: float = 0.1  # cm of pair overlap absorbed by projection residue

    def __post_init__(self) -> None:
        positive = (
            self.arena_side,
            self.robot_diameter,
            self.comm_range,
            self.proximity_range,
            self.target_radius,
            self.target_appear_time,
            self.tick_duration,
            self.angular_speed,
        )
        if any(v <= 0.0 for v in positive) or self.swarm_size <= 0:
            raise ConfigError("world constants must be positive")
        if self.comm_range <= self.robot_diameter:
            raise ConfigError("comm_range must exceed robot_diameter")
        if self.target_radius >= self.arena_side / 2.0:
            raise ConfigError("target region must fit inside the arena")
        if self.proximity_sensor_count <= 0:
            raise ConfigError("need at least one proximity sensor")

    @property
    def robot_radius(self) -> float:
        return self.robot_diameter / 2.0

    @property
    def ticks_per_second(self) -> int:
        return round(1.0 / self.tick_duration)

    @property
    def appear_tick(self) -> int:
        return round(self.target_appear_time * self.ticks_per_second)

    def seconds(self, tick: int) -> float:
        return tick / self.ticks_per_second

    def to_ticks(self, duration_s: float) -> int:
        """Whole-tick duration, rounded up so short windows are never lost."""
        return math.ceil(duration_s * self.ticks_per_second - 1e-9)


@dataclass(frozen=True)
class BehaviorParams:
    """The three manipulated parameters: cruise speed, desired separation, broadcast window."""

    speed: float  # cm/s
    separation: float  # cm
    broadcast: float  # s

    def __post_init__(self) -> None:
        if self.speed <= 0.0 or self.separation <= 0.0:
            raise ConfigError("speed and separation must be positive")
        if self.broadcast < 0.0:
            raise ConfigError("broadcast duration cannot be negative")

    @property
    def config_id(self) -> str:
        return f"v{self.speed:g}-d{self.separation:g}-T{self.broadcast:g}"


@dataclass(frozen=True)
class FlockingGains:
    """Virtual-force constants for the move-to-target controller.

    Defaults were chosen to pass the convergence property (all robots inside
    the target within 60 s from arbitrary poses) and may be overridden.
    """

    attract_gain: float = 1.0
    repel_gain: float = 50.0  # cm^2
    repel_range: float = 10.0  # cm; keeps the settled cluster compact near the center
    settle_radius: float = 5.0  # cm, attraction dead zone around the target center
    heading_gain: float = 4.0  # 1/s
    max_turn_rate: float = math.pi  # rad/s


def full_grid() -> tuple[BehaviorParams, ...]:
    """All 125 combinations of the five-level parameter grids, in a fixed order."""
    return tuple(
        BehaviorParams(speed=v, separation=d, broadcast=t)
        for v, d, t in product(SPEED_LEVELS, SEPARATION_LEVELS, BROADCAST_LEVELS)
    )


@dataclass(frozen=True)
class SwarmConfig:
    """Everything needed to run one deterministic trial."""

    params: BehaviorParams
    seed: int
    max_trial_duration: float = 180.0  # s; sessions use 60
    world: WorldConstants = field(default_factory=WorldConstants)
    flocking: FlockingGains = field(default_factory=FlockingGains)

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if self.max_trial_duration <= self.world.target_appear_time:
            raise ConfigError("max_trial_duration must exceed target_appear_time")

    @property
    def config_id(self) -> str:
        return self.params.config_id

    @property
    def max_trial_ticks(self) -> int:
        return self.world.to_ticks(self.max_trial_duration)
