"""Per-robot controllers: ballistic exploration, information spreading, target convergence.

Controllers are pure functions of (SenseFrame, state, params, rng stream).
They never touch the world directly; the simulation loop evaluates all of
them against the same pre-tick snapshot and applies the commands afterwards,
so evaluation order is irrelevant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .config import BehaviorParams, FlockingGains, WorldConstants
from .geometry import normalize_angle
from .world import Control, Mode, RobotState, SenseFrame, WheelCommand

# Rotation-in-place durations are drawn so the turned angle is uniform in
# [MIN_ROTATION_ANGLE, MAX_ROTATION_ANGLE]. Turns need to be decisive: angles
# below ~60 degrees leave the obstacle in the trigger cone and the robot
# re-rotates in a dithering loop, while full reversals waste spin time.
MIN_ROTATION_ANGLE = math.pi / 3.0
MAX_ROTATION_ANGLE = 5.0 * math.pi / 6.0

# Obstacles (walls or robot bodies on the proximity rays) trigger the ballistic
# rotation only when encountered, i.e. roughly ahead. An all-around trigger
# would lock robots into rotating forever next to walls; a half-plane cone
# makes them dither while skimming walls instead of gliding past.
RAY_TRIGGER_CONE = math.pi / 4.0

# Separation from neighbors is maintained continuously: the robot keeps moving
# and veers away from the nearest too-close neighbor ahead, harder the deeper
# the intrusion. Rotating in place on every too-close neighbor would freeze
# pairs at rest and permanently seal any area occupied by settled robots (an
# approach within d deflects no matter how oblique), which starves late
# explorers and blows up completion times.
NEIGHBOR_TRIGGER_CONE = math.pi / 2.0
SEPARATION_TURN_RATE = math.pi / 2.0  # rad/s at full intrusion

# Cone comparisons need slack: normalize(7 * 2pi/8) lands a few ulp outside pi/4.
_CONE_EPS = 1e-9


class Turn(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class ControllerState:
    """Rotation bookkeeping for the ballistic walk."""

    rotate_ticks_remaining: int = 0
    rotate_direction: Turn = Turn.LEFT


@dataclass(frozen=True)
class Notice:
    """Operator-visible feedback from a rejected or redundant command."""

    code: str
    text: str


@dataclass(frozen=True)
class OperatorFrame:
    """Digested operator input for one tick (latest-wins sampling upstream)."""

    held_turn: Turn | None = None
    share_pressed: bool = False
    move_pressed: bool = False


def _rotate_command(direction: Turn, w: WorldConstants) -> WheelCommand:
    rate = w.angular_speed if direction is Turn.LEFT else -w.angular_speed
    return WheelCommand.rotate(rate)


def _draw_rotation_ticks(rng: np.random.Generator, w: WorldConstants) -> int:
    angle = float(rng.uniform(MIN_ROTATION_ANGLE, MAX_ROTATION_ANGLE))
    return max(1, round(angle / (w.angular_speed * w.tick_duration)))


def _frontal_obstacle(frame: SenseFrame, w: WorldConstants) -> float | None:
    """Bearing of the nearest proximity hit (wall or body) in the forward cone."""
    best_dist = math.inf
    best_bearing: float | None = None
    step = 2.0 * math.pi / w.proximity_sensor_count
    for k, reading in enumerate(frame.proximity):
        if reading is None:
            continue
        ray_angle = normalize_angle(k * step)
        if abs(ray_angle) > RAY_TRIGGER_CONE + _CONE_EPS:
            continue
        if reading < best_dist:
            best_dist = reading
            best_bearing = ray_angle
    return best_bearing


def _separation_veer(frame: SenseFrame, params: BehaviorParams) -> float:
    """Turn rate steering away from the nearest too-close neighbor ahead, 0 if none."""
    nearest: float | None = None
    bearing = 0.0
    for nb in frame.neighbors:
        if nb.range >= params.separation:
            continue
        if abs(nb.bearing) > NEIGHBOR_TRIGGER_CONE + _CONE_EPS:
            continue
        if nearest is None or nb.range < nearest:
            nearest = nb.range
            bearing = nb.bearing
    if nearest is None:
        return 0.0
    intrusion = 1.0 - nearest / params.separation
    rate = SEPARATION_TURN_RATE * intrusion
    # Neighbor on the right (negative bearing, or dead ahead) -> veer left.
    return rate if bearing <= 0.0 else -rate


def explore_step(
    frame: SenseFrame,
    ctl: ControllerState,
    params: BehaviorParams,
    w: WorldConstants,
    rng: np.random.Generator,
) -> tuple[WheelCommand, ControllerState]:
    """Ballistic motion: straight at v, rotate in place away from encountered
    obstacles, veer away from neighbors closer than the desired separation.

    Also used verbatim while broadcasting, which moves exactly like exploration.
    """
    if ctl.rotate_ticks_remaining > 0:
        cmd = _rotate_command(ctl.rotate_direction, w)
        return cmd, replace(ctl, rotate_ticks_remaining=ctl.rotate_ticks_remaining - 1)

    bearing = _frontal_obstacle(frame, w)
    if bearing is not None:
        # Turn away: obstacle on the right (negative bearing, or dead ahead) -> left.
        direction = Turn.LEFT if bearing <= 0.0 else Turn.RIGHT
        ticks = _draw_rotation_ticks(rng, w)
        return _rotate_command(direction, w), ControllerState(
            rotate_ticks_remaining=ticks - 1, rotate_direction=direction
        )

    veer = _separation_veer(frame, params)
    if veer != 0.0:
        return WheelCommand(linear=params.speed, angular=veer), ctl
    return WheelCommand.forward(params.speed), ctl


def broadcast_window_ticks(params: BehaviorParams, w: WorldConstants) -> int:
    return w.to_ticks(params.broadcast)


def update_information_state(
    frame: SenseFrame,
    robot: RobotState,
    params: BehaviorParams,
    w: WorldConstants,
    tick: int,
) -> RobotState:
    """First-time information acquisition and the broadcast-window expiry transition.

    Self-detection wins over inbox messages and stores the true region center.
    Re-deliveries to an already informed robot change nothing. Human-controlled
    robots record the information but keep their mode; behavior switches come
    from operator commands only.
    """
    if robot.known_target is None:
        if frame.in_target:
            known = frame.target_center
        elif frame.inbox:
            known = frame.inbox[0].target  # lowest sender id; payloads are identical
        else:
            return robot
        if robot.control is Control.HUMAN:
            return replace(robot, known_target=known, informed_at_tick=tick)
        window = broadcast_window_ticks(params, w)
        mode = Mode.SHARE_TARGET if window > 0 else Mode.MOVE_TO_TARGET
        return replace(
            robot,
            known_target=known,
            informed_at_tick=tick,
            broadcast_until_tick=tick + window,
            mode=mode,
        )

    if (
        robot.control is Control.AUTONOMOUS
        and robot.mode is Mode.SHARE_TARGET
        and robot.broadcast_until_tick is not None
        and tick >= robot.broadcast_until_tick
    ):
        return replace(robot, mode=Mode.MOVE_TO_TARGET)
    return robot


def move_to_target_step(
    frame: SenseFrame,
    robot: RobotState,
    params: BehaviorParams,
    gains: FlockingGains,
    w: WorldConstants,
) -> WheelCommand:
    """Potential-field convergence: constant attraction to the known target,
    inverse-distance repulsion from close neighbors, heading servo toward the
    resultant. Repulsion range is fixed (independent of the separation d), so
    the swarm packs inside the target regardless of d.
    """
    assert robot.known_target is not None, "move_to_target requires an informed robot"
    pos = robot.pose.position
    to_target = robot.known_target - pos
    dist = to_target.norm()

    fx = fy = 0.0
    if dist > gains.settle_radius:
        fx = gains.attract_gain * to_target.x / dist
        fy = gains.attract_gain * to_target.y / dist
    for nb in frame.neighbors:
        if nb.range >= gains.repel_range or nb.range <= 0.0:
            continue
        magnitude = gains.repel_gain * (1.0 / nb.range - 1.0 / gains.repel_range)
        away = normalize_angle(robot.pose.heading + nb.bearing + math.pi)
        fx += magnitude * math.cos(away)
        fy += magnitude * math.sin(away)

    if math.hypot(fx, fy) < 1e-9:
        return WheelCommand.halt()

    error = normalize_angle(math.atan2(fy, fx) - robot.pose.heading)
    rate = max(-gains.max_turn_rate, min(gains.max_turn_rate, gains.heading_gain * error))
    linear = params.speed if abs(error) <= math.pi / 2.0 else 0.0
    return WheelCommand(linear=linear, angular=rate)


def apply_operator_buttons(
    robot: RobotState, op: OperatorFrame, tick: int
) -> tuple[RobotState, list[Notice]]:
    """Process Share Target / Move to Target presses for the human robot."""
    notices: list[Notice] = []
    if op.share_pressed:
        if robot.mode is Mode.MOVE_TO_TARGET:
            notices.append(Notice("move_to_target_active", "Robot is already moving to the target."))
        elif robot.known_target is None:
            notices.append(Notice("share_rejected", "Your robot has not discovered the target yet."))
        elif robot.mode is not Mode.SHARE_TARGET:
            robot = replace(robot, mode=Mode.SHARE_TARGET, broadcast_until_tick=None)
    if op.move_pressed:
        if robot.known_target is None:
            notices.append(Notice("move_rejected", "Your robot has not discovered the target yet."))
        elif robot.mode is not Mode.MOVE_TO_TARGET:
            robot = replace(robot, mode=Mode.MOVE_TO_TARGET, broadcast_until_tick=None)
    return robot, notices


def human_steer(op: OperatorFrame, params: BehaviorParams, w: WorldConstants) -> WheelCommand:
    """Keyboard steering: held key rotates in place, otherwise straight ahead at v."""
    if op.held_turn is None:
        return WheelCommand.forward(params.speed)
    return _rotate_command(op.held_turn, w)


def human_step(
    op: OperatorFrame,
    frame: SenseFrame,
    robot: RobotState,
    params: BehaviorParams,
    gains: FlockingGains,
    w: WorldConstants,
    tick: int,
) -> tuple[WheelCommand, RobotState, list[Notice]]:
    """Full operator-controlled step: button transitions, then steering or autonomy.

    Once Move to Target has been accepted the keyboard is ignored for the rest
    of the round and the robot converges autonomously.
    """
    robot, notices = apply_operator_buttons(robot, op, tick)
    if robot.mode is Mode.MOVE_TO_TARGET:
        cmd = move_to_target_step(frame, robot, params, gains, w)
    else:
        cmd = human_steer(op, params, w)
    return cmd, robot, notices
