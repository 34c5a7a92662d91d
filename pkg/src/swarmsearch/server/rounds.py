"""Round engine: one operator-in-the-loop trial with a logged, replayable input stream.

The live socket loop and the offline replay path drive the same engine, so a
(RoundSpec, input log) pair fully determines the RoundOutcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..behaviors import Notice, OperatorFrame, Turn
from ..config import SwarmConfig
from ..simulation import Simulator
from .protocol import KEY_EVENT_KINDS, OperatorInput, snapshot_message


@dataclass(frozen=True)
class RoundSpec:
    round_index: int  # 1-based position in the session plan
    config: SwarmConfig
    human_robot_id: int = 0
    time_limit_s: float = 60.0

    def __post_init__(self) -> None:
        if self.round_index < 1:
            raise ValueError("round_index starts at 1")
        if not 0 <= self.human_robot_id < self.config.world.swarm_size:
            raise ValueError("human_robot_id out of range")
        if self.time_limit_s <= self.config.world.target_appear_time:
            raise ValueError("time limit must exceed target appearance")

    @property
    def time_limit_ticks(self) -> int:
        return self.config.world.to_ticks(self.time_limit_s)

    def to_json(self) -> dict:
        return {
            "round_index": self.round_index,
            "human_robot_id": self.human_robot_id,
            "time_limit_s": self.time_limit_s,
            "config": {
                "speed": self.config.params.speed,
                "separation": self.config.params.separation,
                "broadcast": self.config.params.broadcast,
                "seed": self.config.seed,
                "max_trial_duration": self.config.max_trial_duration,
            },
            "config_id": self.config.config_id,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RoundSpec":
        from ..config import BehaviorParams

        cfg = data["config"]
        return cls(
            round_index=int(data["round_index"]),
            human_robot_id=int(data.get("human_robot_id", 0)),
            time_limit_s=float(data.get("time_limit_s", 60.0)),
            config=SwarmConfig(
                params=BehaviorParams(
                    speed=float(cfg["speed"]),
                    separation=float(cfg["separation"]),
                    broadcast=float(cfg["broadcast"]),
                ),
                seed=int(cfg["seed"]),
                max_trial_duration=float(cfg.get("max_trial_duration", 60.0)),
            ),
        )


@dataclass(frozen=True)
class InputLogEntry:
    tick: int  # tick the input was applied to
    kind: str
    key: str | None = None
    client_time_ms: int | None = None

    def to_json(self) -> dict:
        return {
            "tick": self.tick,
            "kind": self.kind,
            "key": self.key,
            "client_time_ms": self.client_time_ms,
        }

    @classmethod
    def from_json(cls, data: dict) -> "InputLogEntry":
        return cls(
            tick=int(data["tick"]),
            kind=data["kind"],
            key=data.get("key"),
            client_time_ms=data.get("client_time_ms"),
        )


@dataclass(frozen=True)
class RoundOutcome:
    round_index: int
    success: bool
    completion_s: float | None
    input_log: tuple[InputLogEntry, ...]
    snapshot_count: int


@dataclass
class _KeyState:
    held: dict[str, int] = field(default_factory=dict)  # key -> press order stamp
    stamp: int = 0

    def press(self, key: str) -> None:
        self.stamp += 1
        self.held[key] = self.stamp

    def release(self, key: str) -> None:
        self.held.pop(key, None)

    def effective_turn(self) -> Turn | None:
        if not self.held:
            return None
        key = max(self.held, key=self.held.__getitem__)  # most recent press wins
        return Turn.LEFT if key == "left" else Turn.RIGHT


class RoundEngine:
    """Steps one round tick by tick, digesting queued operator inputs.

    Inputs queued between ticks apply to the next tick; edges update the held
    key state, button presses latch for exactly one tick. Every accepted input
    is logged with the tick it acted on, which is all replay needs.
    """

    def __init__(self, spec: RoundSpec, target_visible_on_appearance: bool = True) -> None:
        self.spec = spec
        self.target_visible_on_appearance = target_visible_on_appearance
        self.sim = Simulator(spec.config, human_robot_id=spec.human_robot_id)
        self.keys = _KeyState()
        self.share_pressed = False
        self.move_pressed = False
        self.input_log: list[InputLogEntry] = []
        self.snapshot_count = 0
        self.done = False
        self.success = False

    @property
    def current_tick(self) -> int:
        return self.sim.world.tick

    def queue_input(self, inp: OperatorInput) -> None:
        if self.done:
            return
        self.input_log.append(
            InputLogEntry(
                tick=self.current_tick,
                kind=inp.kind,
                key=inp.key,
                client_time_ms=inp.client_time_ms,
            )
        )
        if inp.kind in KEY_EVENT_KINDS:
            if inp.kind == "key_down":
                self.keys.press(inp.key)  # type: ignore[arg-type]
            else:
                self.keys.release(inp.key)  # type: ignore[arg-type]
        elif inp.kind == "share_target":
            self.share_pressed = True
        elif inp.kind == "move_to_target":
            self.move_pressed = True

    def tick(self) -> tuple[dict, list[Notice]]:
        """Advance one tick; returns the snapshot message and operator notices."""
        if self.done:
            raise RuntimeError("round already finished")
        op = OperatorFrame(
            held_turn=self.keys.effective_turn(),
            share_pressed=self.share_pressed,
            move_pressed=self.move_pressed,
        )
        self.share_pressed = False
        self.move_pressed = False

        result = self.sim.step(op)
        self.snapshot_count += 1
        world = result.world
        show_target = (
            self.target_visible_on_appearance
            or world.robots[self.spec.human_robot_id].known_target is not None
        )
        snapshot = snapshot_message(
            world, self.spec.time_limit_s, world.clock, show_target=show_target
        )

        if world.completed_at_tick is not None:
            self.done = True
            self.success = True
        elif world.tick >= self.spec.time_limit_ticks:
            self.done = True
        return snapshot, result.notices

    def outcome(self) -> RoundOutcome:
        world = self.sim.world
        return RoundOutcome(
            round_index=self.spec.round_index,
            success=self.success,
            completion_s=world.completed_at if self.success else None,
            input_log=tuple(self.input_log),
            snapshot_count=self.snapshot_count,
        )


def run_round_offline(spec: RoundSpec, input_log: list[InputLogEntry]) -> RoundOutcome:
    """Replay a logged round without a client or wall clock."""
    engine = RoundEngine(spec)
    by_tick: dict[int, list[InputLogEntry]] = {}
    for entry in input_log:
        by_tick.setdefault(entry.tick, []).append(entry)
    while not engine.done:
        for entry in by_tick.get(engine.current_tick, []):
            engine.queue_input(
                OperatorInput(kind=entry.kind, key=entry.key, client_time_ms=entry.client_time_ms)
            )
        engine.tick()
    return engine.outcome()
