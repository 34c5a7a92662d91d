"""Deterministic 2D swarm collective-search simulator with an experiment
harness and a human-in-the-loop session server."""

from .config import (
    BROADCAST_LEVELS,
    SEPARATION_LEVELS,
    SPEED_LEVELS,
    BehaviorParams,
    FlockingGains,
    SwarmConfig,
    WorldConstants,
    full_grid,
)
from .geometry import Pose, Vec2
from .harness import TrialResult, fit_performance_model, run_sweep, run_trial
from .simulation import Simulator
from .world import (
    Control,
    Mode,
    RobotState,
    SenseFrame,
    TargetRegion,
    WheelCommand,
    WorldState,
    init_world,
)

__all__ = [
    "BROADCAST_LEVELS",
    "SEPARATION_LEVELS",
    "SPEED_LEVELS",
    "BehaviorParams",
    "Control",
    "FlockingGains",
    "Mode",
    "Pose",
    "RobotState",
    "SenseFrame",
    "Simulator",
    "SwarmConfig",
    "TargetRegion",
    "TrialResult",
    "Vec2",
    "WheelCommand",
    "WorldConstants",
    "WorldState",
    "fit_performance_model",
    "init_world",
    "full_grid",
    "run_sweep",
    "run_trial",
]

__version__ = "0.1.0"
