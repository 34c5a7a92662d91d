"""Tick pipeline tying sensing, controllers, messaging and kinematics together.

Per tick, in order: sense against the pre-tick snapshot, update information
state, apply operator commands, evaluate controllers, queue broadcasts (using
this tick's positions and post-information modes), integrate kinematics, then
latch completion. Messages queued on tick k are therefore read by receivers on
tick k+1, giving the one-tick-per-hop spreading semantics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable, IO

import numpy as np

from .behaviors import (
    ControllerState,
    Notice,
    OperatorFrame,
    explore_step,
    human_step,
    move_to_target_step,
    update_information_state,
)
from .config import SwarmConfig
from .rng import robot_stream
from .world import (
    Control,
    Mode,
    WheelCommand,
    WorldState,
    check_completion,
    count_messages,
    deliver_messages,
    init_world,
    sense,
    step_kinematics,
)


@dataclass
class TickResult:
    world: WorldState
    notices: list[Notice] = field(default_factory=list)
    messages_delivered: int = 0


class Simulator:
    """Owns one world plus the mutable pieces around it (controllers, rng streams).

    The WorldState snapshots it produces are immutable; the simulator itself is
    single-threaded. Set ``motion_enabled=False`` to freeze all wheel commands
    while keeping sensing and messaging live (static-network analysis).
    """

    def __init__(
        self,
        config: SwarmConfig,
        human_robot_id: int | None = None,
        world: WorldState | None = None,
        motion_enabled: bool = True,
    ) -> None:
        self.config = config
        self.constants = config.world
        self.params = config.params
        self.gains = config.flocking
        self.motion_enabled = motion_enabled
        self.world = world if world is not None else init_world(config)
        if human_robot_id is not None:
            robots = list(self.world.robots)
            robots[human_robot_id] = replace(robots[human_robot_id], control=Control.HUMAN)
            self.world = replace(self.world, robots=tuple(robots))
        self.human_robot_id = human_robot_id
        n = self.constants.swarm_size
        self.controllers: list[ControllerState] = [ControllerState() for _ in range(n)]
        self.streams: list[np.random.Generator] = [
            robot_stream(config.seed, i) for i in range(n)
        ]
        self.messages_delivered = 0
        self.first_entry_tick: list[int | None] = [None] * n
        self._record_entries()

    # -- bookkeeping ---------------------------------------------------------

    def _record_entries(self) -> None:
        world = self.world
        if world.tick < world.target.appear_tick:
            return
        center = world.target.center
        radius = world.target.radius
        for i, robot in enumerate(world.robots):
            if self.first_entry_tick[i] is None:
                if robot.pose.position.distance_to(center) <= radius:
                    self.first_entry_tick[i] = world.tick

    @property
    def completed(self) -> bool:
        return self.world.completed_at_tick is not None

    def informed_at_ticks(self) -> list[int | None]:
        return [r.informed_at_tick for r in self.world.robots]

    # -- stepping ------------------------------------------------------------

    def step(self, operator: OperatorFrame | None = None) -> TickResult:
        world = self.world
        tick = world.tick
        notices: list[Notice] = []
        op = operator or OperatorFrame()

        frames = [sense(world, i) for i in range(len(world.robots))]

        robots = [
            update_information_state(frames[i], robot, self.params, self.constants, tick)
            for i, robot in enumerate(world.robots)
        ]

        commands: list[WheelCommand] = []
        for i, robot in enumerate(robots):
            if robot.control is Control.HUMAN:
                cmd, robot, robot_notices = human_step(
                    op, frames[i], robot, self.params, self.gains, self.constants, tick
                )
                robots[i] = robot
                notices.extend(robot_notices)
            elif robot.mode is Mode.MOVE_TO_TARGET:
                cmd = move_to_target_step(frames[i], robot, self.params, self.gains, self.constants)
            else:
                cmd, self.controllers[i] = explore_step(
                    frames[i], self.controllers[i], self.params, self.constants, self.streams[i]
                )
            commands.append(cmd if self.motion_enabled else WheelCommand.halt())

        staged = replace(world, robots=tuple(robots))
        queued = deliver_messages(staged)
        delivered = count_messages(queued)
        self.messages_delivered += delivered

        stepped = step_kinematics(staged, commands)
        stepped = replace(stepped, inboxes=queued)
        stepped = check_completion(stepped)

        self.world = stepped
        self._record_entries()
        return TickResult(world=stepped, notices=notices, messages_delivered=delivered)

    def run(
        self,
        max_ticks: int,
        operator_source: Callable[[int], OperatorFrame] | None = None,
        on_tick: Callable[[TickResult], None] | None = None,
        stop_on_completion: bool = True,
    ) -> WorldState:
        """Step until completion latches or max_ticks is reached."""
        while self.world.tick < max_ticks:
            if stop_on_completion and self.completed:
                break
            op = operator_source(self.world.tick) if operator_source else None
            result = self.step(op)
            if on_tick is not None:
                on_tick(result)
        return self.world


# -- trajectory recording ----------------------------------------------------


def world_frame(world: WorldState) -> dict:
    """One trajectory record: clock, per-robot pose and mode, target visibility."""
    target_visible = world.tick >= world.target.appear_tick
    target: dict = {"visible": target_visible}
    if target_visible:
        target["x"] = round(world.target.center.x, 3)
        target["y"] = round(world.target.center.y, 3)
        target["radius"] = world.target.radius
    return {
        "clock": world.clock,
        "robots": [
            {
                "id": r.id,
                "x": round(r.pose.position.x, 3),
                "y": round(r.pose.position.y, 3),
                "heading": round(r.pose.heading, 4),
                "mode": r.mode.value,
            }
            for r in world.robots
        ],
        "target": target,
    }


class TrajectoryWriter:
    """Writes one JSON object per tick (jsonl), starting with the initial state."""

    def __init__(self, stream: IO[str]) -> None:
        self._stream = stream

    def write(self, world: WorldState) -> None:
        json.dump(world_frame(world), self._stream, separators=(",", ":"))
        self._stream.write("\n")
