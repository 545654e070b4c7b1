"""World geometry, kinematics, wrapping, and reward arithmetic."""

import math

import numpy as np
import pytest

from patchback.safety import ExecutedAction
from patchback.sim import (
    Circle,
    RewardConfig,
    RobotState,
    StepEvent,
    WorldConfig,
    compute_reward,
    kinematics_step,
    wrap_angle,
)


def test_rest_action_leaves_pose_unchanged():
    s = RobotState(1.0, 2.0, 0.5)
    out = kinematics_step(s, ExecutedAction(0.0, 0.0), 0.1)
    assert (out.x, out.y, out.heading) == (1.0, 2.0, 0.5)


def test_straight_line_motion():
    s = RobotState(0.0, 0.0, 0.0)
    out = kinematics_step(s, ExecutedAction(1.0, 0.0), 1.0)
    assert out.x == pytest.approx(1.0)
    assert out.y == pytest.approx(0.0)
    assert out.heading == pytest.approx(0.0)


def test_rotation_wraps_heading():
    s = RobotState(0.0, 0.0, math.pi / 2)
    out = kinematics_step(s, ExecutedAction(0.0, math.pi), 1.0)
    assert out.heading == pytest.approx(-math.pi / 2)


def test_dt_must_be_positive():
    with pytest.raises(ValueError):
        kinematics_step(RobotState(0, 0, 0), ExecutedAction(0, 0), 0.0)


def test_wrap_angle_range_property():
    rng = np.random.default_rng(0)
    for theta in rng.uniform(-50, 50, 500):
        w = wrap_angle(float(theta))
        assert -math.pi < w <= math.pi
        # same point on the circle
        assert math.cos(w) == pytest.approx(math.cos(theta), abs=1e-9)
        assert math.sin(w) == pytest.approx(math.sin(theta), abs=1e-9)


def test_wrap_angle_boundary_maps_to_pi():
    assert wrap_angle(math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)


def test_heading_wrapped_after_many_steps():
    s = RobotState(2.0, 2.0, 0.0)
    for _ in range(100):
        s = kinematics_step(s, ExecutedAction(0.0, 2.5), 0.1)
        assert -math.pi < s.heading <= math.pi


# -- world validation / collisions --------------------------------------

def test_start_inside_obstacle_rejected():
    cfg = WorldConfig(circles=(Circle(0.5, 2.0, 0.3),))
    with pytest.raises(ValueError, match="start"):
        cfg.validate()


def test_goal_outside_bounds_rejected():
    with pytest.raises(ValueError, match="goal"):
        WorldConfig(goal=(5.0, 2.0)).validate()


def test_collision_with_wall_and_circle():
    w = WorldConfig()
    assert w.collides(0.05, 2.0)            # hugging the x-min wall
    assert w.collides(2.4, 2.0)             # inside the default obstacle
    assert not w.collides(1.0, 1.0)


def test_default_world_is_valid():
    WorldConfig().validate()


# -- reward --------------------------------------------------------------

def test_goal_bonus_included():
    w = WorldConfig()
    cfg = RewardConfig()
    a = RobotState(3.2, 2.0, 0.0)
    b = RobotState(3.35, 2.0, 0.0)
    r = compute_reward(a, b, StepEvent(reached_goal=True), w, cfg)
    no_goal = compute_reward(a, b, StepEvent(), w, cfg)
    assert r - no_goal == pytest.approx(10.0)


def test_no_motion_costs_step_cost():
    w = WorldConfig()
    s = RobotState(1.0, 1.0, 0.0)
    r = compute_reward(s, s, StepEvent(), w, RewardConfig(step_cost=0.01))
    assert r == pytest.approx(-0.01)


def test_progress_reward_formula():
    w = WorldConfig(goal=(3.5, 2.0))
    a = RobotState(2.0, 2.0, 0.0)
    b = RobotState(2.1, 2.0, 0.0)  # 0.1 m closer to the goal
    r = compute_reward(a, b, StepEvent(), w,
                       RewardConfig(k_progress=1.0, step_cost=0.01))
    assert r == pytest.approx(0.09)


def test_collision_penalty_sign():
    w = WorldConfig()
    s = RobotState(1.0, 1.0, 0.0)
    r = compute_reward(s, s, StepEvent(collided=True), w, RewardConfig())
    assert r == pytest.approx(-5.01)
