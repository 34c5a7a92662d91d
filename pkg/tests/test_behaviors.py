import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmsearch.behaviors import (
    MAX_ROTATION_ANGLE,
    MIN_ROTATION_ANGLE,
    ControllerState,
    OperatorFrame,
    Turn,
    apply_operator_buttons,
    broadcast_window_ticks,
    explore_step,
    human_steer,
    move_to_target_step,
    update_information_state,
)
from swarmsearch.config import BehaviorParams, FlockingGains, WorldConstants
from swarmsearch.geometry import Vec2, Pose
from swarmsearch.world import (
    Control,
    Mode,
    NeighborReading,
    RobotState,
    SenseFrame,
    TargetMessage,
)

W = WorldConstants()
GAINS = FlockingGains()
CLEAR = tuple([None] * 8)


def frame(proximity=CLEAR, neighbors=(), in_target=False, target_center=None, inbox=()):
    return SenseFrame(
        proximity=proximity,
        neighbors=neighbors,
        in_target=in_target,
        target_center=target_center,
        inbox=inbox,
    )


def robot(mode=Mode.EXPLORE, control=Control.AUTONOMOUS, heading=0.0, **kwargs):
    defaults = dict(
        id=0,
        pose=Pose(Vec2(75.0, 75.0), heading),
        linear_speed=10.0,
        mode=mode,
        control=control,
    )
    defaults.update(kwargs)
    return RobotState(**defaults)


def rng(seed=0):
    return np.random.default_rng(seed)


# -- explore ------------------------------------------------------------------


def test_open_space_moves_forward_at_v(params):
    cmd, ctl = explore_step(frame(), ControllerState(), params, W, rng())
    assert cmd.linear == params.speed and cmd.angular == 0.0
    assert ctl == ControllerState()


def test_close_neighbor_on_left_veers_right(params):
    nb = NeighborReading(id=1, range=params.separation - 1.0, bearing=math.pi / 4.0)
    cmd, _ = explore_step(frame(neighbors=(nb,)), ControllerState(), params, W, rng())
    assert cmd.angular < 0.0  # turning right, away from the left-side neighbor
    assert cmd.linear == params.speed  # separation is maintained without stopping


def test_close_neighbor_on_right_veers_left(params):
    nb = NeighborReading(id=1, range=params.separation - 1.0, bearing=-math.pi / 4.0)
    cmd, _ = explore_step(frame(neighbors=(nb,)), ControllerState(), params, W, rng())
    assert cmd.angular > 0.0


def test_neighbor_at_separation_distance_ignored(params):
    nb = NeighborReading(id=1, range=params.separation, bearing=0.0)
    cmd, _ = explore_step(frame(neighbors=(nb,)), ControllerState(), params, W, rng())
    assert cmd.angular == 0.0 and cmd.linear == params.speed


def test_neighbor_behind_does_not_trigger(params):
    nb = NeighborReading(id=1, range=5.0, bearing=math.pi)
    cmd, _ = explore_step(frame(neighbors=(nb,)), ControllerState(), params, W, rng())
    assert cmd.angular == 0.0 and cmd.linear == params.speed


def test_wall_on_right_ray_rotates_left(params):
    # Ray 7 sits at -45 degrees (right side).
    proximity = list(CLEAR)
    proximity[7] = 9.0
    cmd, ctl = explore_step(frame(proximity=tuple(proximity)), ControllerState(), params, W, rng())
    assert cmd.linear == 0.0 and cmd.angular == W.angular_speed  # rotate in place, left
    assert ctl.rotate_direction is Turn.LEFT


def test_wall_dead_ahead_rotates_left(params):
    proximity = list(CLEAR)
    proximity[0] = 8.0
    cmd, ctl = explore_step(frame(proximity=tuple(proximity)), ControllerState(), params, W, rng())
    assert cmd.linear == 0.0 and ctl.rotate_direction is Turn.LEFT


def test_rear_proximity_does_not_trigger(params):
    proximity = list(CLEAR)
    proximity[4] = 5.0  # directly behind
    cmd, _ = explore_step(frame(proximity=tuple(proximity)), ControllerState(), params, W, rng())
    assert cmd.linear == params.speed and cmd.angular == 0.0


def test_rotation_runs_to_completion_before_reassessing(params):
    proximity = list(CLEAR)
    proximity[0] = 8.0
    cmd, ctl = explore_step(frame(proximity=tuple(proximity)), ControllerState(), params, W, rng())
    ticks = 1 + ctl.rotate_ticks_remaining
    # Continue in open space: the rotation must finish regardless of stimuli.
    for _ in range(ctl.rotate_ticks_remaining):
        cmd, ctl = explore_step(frame(), ctl, params, W, rng())
        assert cmd.linear == 0.0 and cmd.angular == W.angular_speed
    cmd, ctl = explore_step(frame(), ctl, params, W, rng())
    assert cmd.linear == params.speed
    min_ticks = round(MIN_ROTATION_ANGLE / (W.angular_speed * W.tick_duration))
    max_ticks = round(MAX_ROTATION_ANGLE / (W.angular_speed * W.tick_duration))
    assert min_ticks <= ticks <= max_ticks


@given(
    bearing=st.floats(min_value=-math.pi / 2.0, max_value=math.pi / 2.0),
    range_frac=st.floats(min_value=0.35, max_value=0.999),
)
def test_separation_response_never_plain_forward(bearing, range_frac):
    # A frontal neighbor closer than d, no walls in range: the robot never
    # drives plain straight ahead; it veers away from the neighbor.
    params = BehaviorParams(speed=10.0, separation=20.0, broadcast=8.0)
    nb = NeighborReading(id=1, range=params.separation * range_frac, bearing=bearing)
    cmd, _ = explore_step(frame(neighbors=(nb,)), ControllerState(), params, W, rng())
    assert cmd.angular != 0.0
    if bearing > 0.0:
        assert cmd.angular < 0.0
    elif bearing < 0.0:
        assert cmd.angular > 0.0


def test_nearest_stimulus_wins(params):
    # Obstacle ahead at 4 cm outranks a closer-bearing neighbor at 12 cm.
    proximity = list(CLEAR)
    proximity[1] = 4.0  # +45 degrees: left side
    nb = NeighborReading(id=1, range=12.0, bearing=-0.3)
    cmd, ctl = explore_step(
        frame(proximity=tuple(proximity), neighbors=(nb,)), ControllerState(), params, W, rng()
    )
    assert cmd.linear == 0.0 and ctl.rotate_direction is Turn.RIGHT


# -- information state ----------------------------------------------------------


def test_first_detection_sets_share_mode(params):
    center = Vec2(80.0, 80.0)
    updated = update_information_state(
        frame(in_target=True, target_center=center), robot(), params, W, tick=120
    )
    assert updated.known_target == center
    assert updated.informed_at_tick == 120
    assert updated.mode is Mode.SHARE_TARGET
    assert updated.broadcast_until_tick == 120 + 80  # T = 8 s at 10 ticks/s


def test_zero_broadcast_goes_straight_to_move(params):
    params0 = BehaviorParams(speed=10.0, separation=20.0, broadcast=0.0)
    updated = update_information_state(
        frame(in_target=True, target_center=Vec2(80.0, 80.0)), robot(), params0, W, tick=50
    )
    assert updated.mode is Mode.MOVE_TO_TARGET
    assert updated.broadcast_until_tick == 50
    assert broadcast_window_ticks(params0, W) == 0


def test_inbox_informs_with_lowest_sender_id(params):
    inbox = (
        TargetMessage(sender_id=2, target=Vec2(60.0, 60.0)),
        TargetMessage(sender_id=5, target=Vec2(60.0, 60.0)),
    )
    updated = update_information_state(frame(inbox=inbox), robot(), params, W, tick=40)
    assert updated.known_target == Vec2(60.0, 60.0)
    assert updated.informed_at_tick == 40


def test_self_detection_wins_over_inbox(params):
    center = Vec2(80.0, 80.0)
    inbox = (TargetMessage(sender_id=3, target=Vec2(60.0, 60.0)),)
    updated = update_information_state(
        frame(in_target=True, target_center=center, inbox=inbox), robot(), params, W, tick=40
    )
    assert updated.known_target == center


def test_redelivery_to_informed_robot_changes_nothing(params):
    informed = robot(
        mode=Mode.SHARE_TARGET,
        informed_at_tick=100,
        broadcast_until_tick=180,
        known_target=Vec2(80.0, 80.0),
    )
    inbox = (TargetMessage(sender_id=4, target=Vec2(10.0, 10.0)),)
    updated = update_information_state(frame(inbox=inbox), informed, params, W, tick=150)
    assert updated.informed_at_tick == 100
    assert updated.broadcast_until_tick == 180
    assert updated.known_target == Vec2(80.0, 80.0)


def test_share_window_expires_into_move(params):
    informed = robot(
        mode=Mode.SHARE_TARGET,
        informed_at_tick=120,
        broadcast_until_tick=200,
        known_target=Vec2(80.0, 80.0),
    )
    still = update_information_state(frame(), informed, params, W, tick=199)
    assert still.mode is Mode.SHARE_TARGET
    done = update_information_state(frame(), informed, params, W, tick=200)
    assert done.mode is Mode.MOVE_TO_TARGET


def test_human_robot_keeps_mode_when_informed(params):
    human = robot(control=Control.HUMAN)
    updated = update_information_state(
        frame(in_target=True, target_center=Vec2(80.0, 80.0)), human, params, W, tick=60
    )
    assert updated.mode is Mode.EXPLORE
    assert updated.known_target == Vec2(80.0, 80.0)
    assert updated.broadcast_until_tick is None


# -- move to target -------------------------------------------------------------


def test_aligned_robot_drives_straight_at_v(params):
    informed = robot(
        mode=Mode.MOVE_TO_TARGET, known_target=Vec2(125.0, 75.0), heading=0.0
    )
    cmd = move_to_target_step(frame(), informed, params, GAINS, W)
    assert cmd.linear == params.speed
    assert cmd.angular == pytest.approx(0.0)


def test_heading_controller_turns_toward_target(params):
    informed = robot(
        mode=Mode.MOVE_TO_TARGET, known_target=Vec2(75.0, 125.0), heading=0.0
    )
    cmd = move_to_target_step(frame(), informed, params, GAINS, W)
    assert cmd.angular > 0.0
    assert cmd.angular <= GAINS.max_turn_rate


def test_facing_away_turns_without_driving(params):
    informed = robot(
        mode=Mode.MOVE_TO_TARGET, known_target=Vec2(25.0, 75.0), heading=0.0
    )
    cmd = move_to_target_step(frame(), informed, params, GAINS, W)
    assert cmd.linear == 0.0
    assert abs(cmd.angular) == GAINS.max_turn_rate


def test_settled_robot_halts(params):
    informed = robot(mode=Mode.MOVE_TO_TARGET, known_target=Vec2(75.0 + 2.0, 75.0))
    cmd = move_to_target_step(frame(), informed, params, GAINS, W)
    assert cmd.linear == 0.0 and cmd.angular == 0.0


def test_repulsion_pushes_away_from_close_neighbor(params):
    # Settled at the target, neighbor dead ahead within repel range: back-turn.
    informed = robot(mode=Mode.MOVE_TO_TARGET, known_target=Vec2(77.0, 75.0), heading=0.0)
    nb = NeighborReading(id=1, range=GAINS.repel_range / 2.0, bearing=0.0)
    cmd = move_to_target_step(frame(neighbors=(nb,)), informed, params, GAINS, W)
    # Net force points away from the neighbor (behind the robot): no forward drive.
    assert cmd.linear == 0.0
    assert abs(cmd.angular) > 0.0


@given(
    heading=st.floats(min_value=-math.pi, max_value=math.pi - 1e-9),
    tx=st.floats(min_value=25.0, max_value=125.0),
    ty=st.floats(min_value=25.0, max_value=125.0),
    nb_range=st.floats(min_value=7.0, max_value=36.0),
    nb_bearing=st.floats(min_value=-math.pi, max_value=math.pi - 1e-9),
)
@settings(max_examples=80)
def test_move_commands_respect_speed_bound(heading, tx, ty, nb_range, nb_bearing):
    params = BehaviorParams(speed=12.5, separation=20.0, broadcast=8.0)
    informed = robot(mode=Mode.MOVE_TO_TARGET, known_target=Vec2(tx, ty), heading=heading)
    nb = NeighborReading(id=1, range=nb_range, bearing=nb_bearing)
    cmd = move_to_target_step(frame(neighbors=(nb,)), informed, params, GAINS, W)
    assert 0.0 <= cmd.linear <= params.speed
    assert abs(cmd.angular) <= GAINS.max_turn_rate


# -- operator control -------------------------------------------------------------


def test_no_keys_drives_forward(params):
    cmd = human_steer(OperatorFrame(), params, W)
    assert cmd.linear == params.speed and cmd.angular == 0.0


def test_held_key_rotates_in_place(params):
    cmd = human_steer(OperatorFrame(held_turn=Turn.LEFT), params, W)
    assert cmd.linear == 0.0 and cmd.angular == W.angular_speed
    cmd = human_steer(OperatorFrame(held_turn=Turn.RIGHT), params, W)
    assert cmd.angular == -W.angular_speed


def test_share_button_rejected_while_uninformed():
    human = robot(control=Control.HUMAN)
    updated, notices = apply_operator_buttons(human, OperatorFrame(share_pressed=True), tick=10)
    assert updated.mode is Mode.EXPLORE
    assert [n.code for n in notices] == ["share_rejected"]


def test_move_button_rejected_while_uninformed():
    human = robot(control=Control.HUMAN)
    updated, notices = apply_operator_buttons(human, OperatorFrame(move_pressed=True), tick=10)
    assert updated.mode is Mode.EXPLORE
    assert [n.code for n in notices] == ["move_rejected"]


def test_share_button_starts_unbounded_broadcast():
    human = robot(control=Control.HUMAN, known_target=Vec2(80.0, 80.0), informed_at_tick=50)
    updated, notices = apply_operator_buttons(human, OperatorFrame(share_pressed=True), tick=60)
    assert updated.mode is Mode.SHARE_TARGET
    assert updated.broadcast_until_tick is None
    assert notices == []


def test_move_button_is_final():
    human = robot(
        control=Control.HUMAN,
        known_target=Vec2(80.0, 80.0),
        informed_at_tick=50,
        mode=Mode.SHARE_TARGET,
    )
    updated, _ = apply_operator_buttons(human, OperatorFrame(move_pressed=True), tick=70)
    assert updated.mode is Mode.MOVE_TO_TARGET
    again, notices = apply_operator_buttons(updated, OperatorFrame(share_pressed=True), tick=80)
    assert again.mode is Mode.MOVE_TO_TARGET
    assert [n.code for n in notices] == ["move_to_target_active"]
