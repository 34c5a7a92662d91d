"""Fixed-timestep world model: arena, robot states, kinematics, sensing, messaging.

The world advances in whole ticks (`WorldConstants.tick_duration` seconds per
tick). Every function here is deterministic given its inputs; randomness only
enters through the generators passed in explicitly. `WorldState` and its
members are frozen dataclasses, so a state handed to another thread for
rendering or serialization never changes under it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .config import SwarmConfig, WorldConstants
from .geometry import Pose, Vec2, normalize_angle
from .rng import world_stream


class Mode(str, enum.Enum):
    EXPLORE = "explore"
    SHARE_TARGET = "share_target"
    MOVE_TO_TARGET = "move_to_target"


class Control(str, enum.Enum):
    AUTONOMOUS = "autonomous"
    HUMAN = "human"


class PlacementError(RuntimeError):
    """Rejection sampling could not place the swarm (pathological constants)."""


@dataclass(frozen=True)
class TargetRegion:
    center: Vec2
    radius: float
    appear_tick: int


@dataclass(frozen=True)
class TargetMessage:
    sender_id: int
    target: Vec2


@dataclass(frozen=True)
class RobotState:
    id: int
    pose: Pose
    linear_speed: float  # cruise speed v, cm/s
    mode: Mode = Mode.EXPLORE
    informed_at_tick: int | None = None
    # Broadcast deadline in ticks; None while uninformed, and None for a
    # human-controlled robot sharing continuously (no deadline).
    broadcast_until_tick: int | None = None
    known_target: Vec2 | None = None
    control: Control = Control.AUTONOMOUS

    @property
    def informed(self) -> bool:
        return self.known_target is not None


@dataclass(frozen=True)
class NeighborReading:
    id: int
    range: float  # cm, center to center
    bearing: float  # rad, body frame, [-pi, pi)


@dataclass(frozen=True)
class SenseFrame:
    """Everything one robot perceives on one tick."""

    proximity: tuple[float | None, ...]  # per ray: distance if <= range, else None (clear)
    neighbors: tuple[NeighborReading, ...]
    in_target: bool
    # True target center, granted on detection only; None whenever in_target is False.
    target_center: Vec2 | None
    inbox: tuple[TargetMessage, ...]


@dataclass(frozen=True)
class WheelCommand:
    """Differential-drive command for one tick: linear cm/s plus angular rad/s (+ = left)."""

    linear: float
    angular: float

    @classmethod
    def forward(cls, speed: float) -> "WheelCommand":
        return cls(linear=speed, angular=0.0)

    @classmethod
    def rotate(cls, rate: float) -> "WheelCommand":
        return cls(linear=0.0, angular=rate)

    @classmethod
    def halt(cls) -> "WheelCommand":
        return cls(linear=0.0, angular=0.0)


@dataclass(frozen=True)
class WorldState:
    tick: int
    robots: tuple[RobotState, ...]
    target: TargetRegion
    completed_at_tick: int | None
    # Messages queued by the previous tick's deliver_messages, consumed by sense().
    inboxes: tuple[tuple[TargetMessage, ...], ...]
    constants: WorldConstants

    @property
    def clock(self) -> float:
        return self.constants.seconds(self.tick)

    @property
    def completed_at(self) -> float | None:
        if self.completed_at_tick is None:
            return None
        return self.constants.seconds(self.completed_at_tick)


def _empty_inboxes(n: int) -> tuple[tuple[TargetMessage, ...], ...]:
    return tuple(() for _ in range(n))


_PLACEMENT_ATTEMPTS = 10_000


def init_world(config: SwarmConfig, rng: np.random.Generator | None = None) -> WorldState:
    """Place the swarm uniformly at random without overlaps and sample the target.

    Identical (config, seed) always yields a bit-identical world. The optional
    generator argument lets tests drive placement from a shared stream.
    """
    w = config.world
    if rng is None:
        rng = world_stream(config.seed)
    lo = w.robot_radius
    hi = w.arena_side - w.robot_radius

    positions: list[Vec2] = []
    for _ in range(w.swarm_size):
        for _attempt in range(_PLACEMENT_ATTEMPTS):
            cand = Vec2(float(rng.uniform(lo, hi)), float(rng.uniform(lo, hi)))
            if all(cand.distance_to(p) >= w.robot_diameter for p in positions):
                positions.append(cand)
                break
        else:
            raise PlacementError(
                f"could not place robot {len(positions)} after {_PLACEMENT_ATTEMPTS} attempts"
            )

    headings = [float(rng.uniform(-math.pi, math.pi)) for _ in range(w.swarm_size)]

    margin = w.target_radius
    center = Vec2(
        float(rng.uniform(margin, w.arena_side - margin)),
        float(rng.uniform(margin, w.arena_side - margin)),
    )
    target = TargetRegion(center=center, radius=w.target_radius, appear_tick=w.appear_tick)

    robots = tuple(
        RobotState(id=i, pose=Pose(positions[i], headings[i]), linear_speed=config.params.speed)
        for i in range(w.swarm_size)
    )
    return WorldState(
        tick=0,
        robots=robots,
        target=target,
        completed_at_tick=None,
        inboxes=_empty_inboxes(w.swarm_size),
        constants=w,
    )


def world_from_poses(
    config: SwarmConfig,
    poses: Sequence[Pose],
    target_center: Vec2,
) -> WorldState:
    """Build a world from scripted poses instead of random placement.

    Poses must already satisfy the containment and non-penetration invariants;
    this is checked eagerly so a bad script fails at construction.
    """
    w = config.world
    if len(poses) != w.swarm_size:
        raise ValueError(f"need {w.swarm_size} poses, got {len(poses)}")
    lo = w.robot_radius - 1e-9
    hi = w.arena_side - w.robot_radius + 1e-9
    for pose in poses:
        if not (lo <= pose.position.x <= hi and lo <= pose.position.y <= hi):
            raise ValueError(f"pose {pose} leaves the arena")
    for i in range(len(poses)):
        for j in range(i + 1, len(poses)):
            if poses[i].position.distance_to(poses[j].position) < w.robot_diameter - 1e-9:
                raise ValueError(f"poses {i} and {j} overlap")
    margin = w.target_radius
    if not (
        margin <= target_center.x <= w.arena_side - margin
        and margin <= target_center.y <= w.arena_side - margin
    ):
        raise ValueError("target region must lie fully inside the arena")

    robots = tuple(
        RobotState(id=i, pose=pose, linear_speed=config.params.speed)
        for i, pose in enumerate(poses)
    )
    target = TargetRegion(center=target_center, radius=w.target_radius, appear_tick=w.appear_tick)
    return WorldState(
        tick=0,
        robots=robots,
        target=target,
        completed_at_tick=None,
        inboxes=_empty_inboxes(w.swarm_size),
        constants=w,
    )


def _wall_ray_distance(x: float, y: float, dx: float, dy: float, side: float) -> float:
    """Distance along the ray from (x, y) to the arena boundary."""
    best = math.inf
    if dx > 0.0:
        best = (side - x) / dx
    elif dx < 0.0:
        best = -x / dx
    if dy > 0.0:
        t = (side - y) / dy
        if t < best:
            best = t
    elif dy < 0.0:
        t = -y / dy
        if t < best:
            best = t
    return best


def _robot_ray_distance(
    x: float, y: float, dx: float, dy: float, ox: float, oy: float, radius: float
) -> float:
    """Distance along the ray to the surface of a robot body at (ox, oy), or inf."""
    rx = ox - x
    ry = oy - y
    proj = rx * dx + ry * dy
    if proj <= 0.0:
        return math.inf
    perp_sq = rx * rx + ry * ry - proj * proj
    rad_sq = radius * radius
    if perp_sq > rad_sq:
        return math.inf
    return proj - math.sqrt(rad_sq - perp_sq)


def sense(world: WorldState, robot_id: int) -> SenseFrame:
    """Assemble the per-tick sensor frame for one robot."""
    w = world.constants
    me = world.robots[robot_id]
    x, y = me.pose.position.x, me.pose.position.y
    heading = me.pose.heading

    neighbors: list[NeighborReading] = []
    near_bodies: list[tuple[float, float]] = []
    body_reach = w.proximity_range + w.robot_radius
    for other in world.robots:
        if other.id == robot_id:
            continue
        ox, oy = other.pose.position.x, other.pose.position.y
        dist = math.hypot(ox - x, oy - y)
        if dist <= w.comm_range:
            bearing = normalize_angle(math.atan2(oy - y, ox - x) - heading)
            neighbors.append(NeighborReading(id=other.id, range=dist, bearing=bearing))
        if dist <= body_reach:
            near_bodies.append((ox, oy))

    step = 2.0 * math.pi / w.proximity_sensor_count
    proximity: list[float | None] = []
    for k in range(w.proximity_sensor_count):
        ang = heading + k * step
        dx = math.cos(ang)
        dy = math.sin(ang)
        hit = _wall_ray_distance(x, y, dx, dy, w.arena_side)
        for ox, oy in near_bodies:
            t = _robot_ray_distance(x, y, dx, dy, ox, oy, w.robot_radius)
            if t < hit:
                hit = t
        proximity.append(hit if hit <= w.proximity_range else None)

    in_target = (
        world.tick >= world.target.appear_tick
        and me.pose.position.distance_to(world.target.center) <= world.target.radius
    )
    return SenseFrame(
        proximity=tuple(proximity),
        neighbors=tuple(neighbors),
        in_target=in_target,
        target_center=world.target.center if in_target else None,
        inbox=world.inboxes[robot_id],
    )


def is_broadcasting(robot: RobotState, tick: int) -> bool:
    """True when the robot deposits its known target into neighbors' inboxes this tick."""
    if robot.mode is not Mode.SHARE_TARGET or robot.known_target is None:
        return False
    if robot.broadcast_until_tick is None:
        # Human-controlled continuous sharing has no deadline.
        return robot.control is Control.HUMAN
    return tick < robot.broadcast_until_tick


def deliver_messages(world: WorldState) -> tuple[tuple[TargetMessage, ...], ...]:
    """Queue broadcast payloads for next tick's sense, using this tick's positions.

    Inboxes come back ordered by sender id because robots are iterated in id
    order, which fixes the documented first-message tie-break.
    """
    w = world.constants
    inboxes: list[list[TargetMessage]] = [[] for _ in world.robots]
    for sender in world.robots:
        if not is_broadcasting(sender, world.tick):
            continue
        msg = TargetMessage(sender_id=sender.id, target=sender.known_target)
        sx, sy = sender.pose.position.x, sender.pose.position.y
        for other in world.robots:
            if other.id == sender.id:
                continue
            ox, oy = other.pose.position.x, other.pose.position.y
            if math.hypot(ox - sx, oy - sy) <= w.comm_range:
                inboxes[other.id].append(msg)
    return tuple(tuple(box) for box in inboxes)


def count_messages(inboxes: Sequence[Sequence[TargetMessage]]) -> int:
    return sum(len(box) for box in inboxes)


def resolve_collisions(positions: list[tuple[float, float]], w: WorldConstants) -> list[tuple[float, float]]:
    """Project positions out of walls and out of pairwise overlap.

    Positional projection only: wall containment is clamped, overlapping pairs
    are pushed apart symmetrically along their center line. Iterates until a
    full pass makes no change; `overlap_tolerance` absorbs any residue left at
    the iteration cap. The final wall clamp makes containment unconditional.
    """
    lo = w.robot_radius
    hi = w.arena_side - w.robot_radius
    min_sep = w.robot_diameter
    n = len(positions)
    pos = [list(p) for p in positions]

    for _ in range(32):
        changed = False
        for p in pos:
            cx = min(max(p[0], lo), hi)
            cy = min(max(p[1], lo), hi)
            if cx != p[0] or cy != p[1]:
                p[0], p[1] = cx, cy
                changed = True
        for i in range(n):
            pi = pos[i]
            for j in range(i + 1, n):
                pj = pos[j]
                dx = pj[0] - pi[0]
                dy = pj[1] - pi[1]
                dist = math.hypot(dx, dy)
                if dist >= min_sep - 1e-12:
                    continue
                if dist < 1e-9:
                    # Coincident centers cannot arise from bounded per-tick motion,
                    # but keep the projection defined and deterministic.
                    ux, uy = 1.0, 0.0
                else:
                    ux, uy = dx / dist, dy / dist
                push = (min_sep - dist) / 2.0
                pi[0] -= ux * push
                pi[1] -= uy * push
                pj[0] += ux * push
                pj[1] += uy * push
                changed = True
        if not changed:
            break

    return [(min(max(p[0], lo), hi), min(max(p[1], lo), hi)) for p in pos]


def step_kinematics(world: WorldState, commands: Sequence[WheelCommand]) -> WorldState:
    """Advance one tick: integrate commands, resolve collisions, bump the clock.

    Translation uses the heading the command was issued against; rotation is
    applied afterwards. Queued inboxes are cleared (they were consumed by this
    tick's sense); the caller re-attaches freshly delivered messages.
    """
    w = world.constants
    dt = w.tick_duration
    moved: list[tuple[float, float]] = []
    headings: list[float] = []
    for robot, cmd in zip(world.robots, commands):
        if cmd.linear < 0.0:
            raise ValueError("wheel commands cannot drive backwards")
        p = robot.pose.position
        h = robot.pose.heading
        moved.append((p.x + dt * cmd.linear * math.cos(h), p.y + dt * cmd.linear * math.sin(h)))
        headings.append(normalize_angle(h + dt * cmd.angular))

    resolved = resolve_collisions(moved, w)
    robots = tuple(
        replace(robot, pose=Pose(Vec2(px, py), heading))
        for robot, (px, py), heading in zip(world.robots, resolved, headings)
    )
    return replace(
        world,
        tick=world.tick + 1,
        robots=robots,
        inboxes=_empty_inboxes(len(robots)),
    )


def check_completion(world: WorldState) -> WorldState:
    """Latch the completion time once every robot center is inside the visible target."""
    if world.completed_at_tick is not None:
        return world
    if world.tick < world.target.appear_tick:
        return world
    center = world.target.center
    radius = world.target.radius
    if all(r.pose.position.distance_to(center) <= radius for r in world.robots):
        return replace(world, completed_at_tick=world.tick)
    return world
