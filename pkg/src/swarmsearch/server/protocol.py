"""Wire message schemas for the operator socket.

All messages are JSON text frames. Units on the wire are centimeters,
radians and seconds; field order is fixed by construction order below.
Snapshots taken before the target appears carry only the visibility flag,
never the target coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..world import Control, WorldState

KEY_EVENT_KINDS = frozenset({"key_down", "key_up"})
BUTTON_KINDS = frozenset({"share_target", "move_to_target"})
INPUT_KINDS = KEY_EVENT_KINDS | BUTTON_KINDS
KEYS = frozenset({"left", "right"})


class ProtocolError(ValueError):
    def __init__(self, code: str, text: str) -> None:
        super().__init__(text)
        self.code = code
        self.text = text


@dataclass(frozen=True)
class OperatorInput:
    """A steering or behavior command from the operator client."""

    kind: str
    key: str | None = None
    client_time_ms: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in INPUT_KINDS:
            raise ProtocolError("bad_input_kind", f"unknown input kind {self.kind!r}")
        if self.kind in KEY_EVENT_KINDS:
            if self.key not in KEYS:
                raise ProtocolError("bad_input_key", "key events need key 'left' or 'right'")
        elif self.key is not None:
            raise ProtocolError("bad_input_key", f"{self.kind} does not take a key")


def parse_operator_input(data: dict) -> OperatorInput:
    client_time = data.get("client_time")
    if client_time is not None:
        client_time = int(client_time)
    return OperatorInput(
        kind=str(data.get("kind", "")),
        key=data.get("key"),
        client_time_ms=client_time,
    )


def snapshot_message(
    world: WorldState,
    time_limit_s: float,
    round_clock_s: float,
    show_target: bool = True,
) -> dict:
    """Compact per-tick state for rendering: robots, target (when visible), timing.

    ``show_target=False`` withholds the region even after it appears (for
    servers configured to reveal it only once the operator's robot knows it).
    """
    target_visible = show_target and world.tick >= world.target.appear_tick
    target: dict = {"visible": target_visible}
    if target_visible:
        target["x"] = round(world.target.center.x, 3)
        target["y"] = round(world.target.center.y, 3)
        target["radius"] = world.target.radius

    human_informed = False
    robots = []
    for r in world.robots:
        is_human = r.control is Control.HUMAN
        if is_human and r.known_target is not None:
            human_informed = True
        robots.append(
            {
                "id": r.id,
                "x": round(r.pose.position.x, 3),
                "y": round(r.pose.position.y, 3),
                "heading": round(r.pose.heading, 4),
                "mode": r.mode.value,
                "is_human": is_human,
            }
        )
    return {
        "type": "snapshot",
        "clock_s": round_clock_s,
        "remaining_s": max(0.0, round(time_limit_s - round_clock_s, 3)),
        "robots": robots,
        "target": target,
        "comm_range_cm": world.constants.comm_range,
        "human_informed": human_informed,
    }


def round_start_message(round_index: int, time_limit_s: float) -> dict:
    return {"type": "round_start", "round_index": round_index, "time_limit_s": time_limit_s}


def round_end_message(success: bool, completion_s: float | None) -> dict:
    return {"type": "round_end", "success": success, "completion_s": completion_s}


def notice_message(code: str, text: str) -> dict:
    return {"type": "notice", "code": code, "text": text}
