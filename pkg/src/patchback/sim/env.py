"""Closed-loop navigation environment.

The environment owns the safety filter: callers hand in raw policy
commands and only ever see the executed ones, which keeps the filter a
black box to everything above this layer. A passthrough mode (used for
attenuation measurements) swaps the filter for the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import safety
from .camera import RenderConfig, render_camera
from .lidar import MAX_RANGE, raycast, subsample
from .world import RobotState, StepEvent, WorldConfig, wrap_angle


@dataclass(frozen=True)
class RewardConfig:
    k_progress: float = 1.0
    goal_bonus: float = 10.0
    collision_penalty: float = 5.0
    step_cost: float = 0.01


@dataclass
class Observation:
    image: np.ndarray       # [H, W, 3] in [0, 1]
    ranges: np.ndarray      # 36 subsampled ranges, meters

    def validate(self):
        if self.image.ndim != 3 or self.image.shape[2] != 3:
            raise ValueError(f"bad image shape {self.image.shape}")
        if self.ranges.shape != (36,):
            raise ValueError(f"bad range vector shape {self.ranges.shape}")
        if not (np.isfinite(self.image).all() and np.isfinite(self.ranges).all()):
            raise ValueError("non-finite observation")
        return self


def compute_reward(prev_state: RobotState, new_state: RobotState,
                   event: StepEvent, world: WorldConfig,
                   cfg: RewardConfig) -> float:
    """Progress-shaped reward with terminal bonuses/penalties."""
    d_prev = world.dist_to_goal(prev_state.x, prev_state.y)
    d_new = world.dist_to_goal(new_state.x, new_state.y)
    r = cfg.k_progress * (d_prev - d_new) - cfg.step_cost
    if event.reached_goal:
        r += cfg.goal_bonus
    if event.collided:
        r -= cfg.collision_penalty
    return r


def kinematics_step(state: RobotState, executed: safety.ExecutedAction,
                    dt: float) -> RobotState:
    """Unicycle update: translate along the old heading, then rotate."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    return RobotState(
        x=state.x + executed.v * math.cos(state.heading) * dt,
        y=state.y + executed.v * math.sin(state.heading) * dt,
        heading=wrap_angle(state.heading + executed.w * dt),
        v=executed.v,
        w=executed.w,
    )


class NavEnv:
    """One robot in one world; instances are independent and never shared."""

    def __init__(self, world: WorldConfig, render_cfg: RenderConfig | None = None,
                 safety_cfg: safety.SafetyConfig | None = None,
                 reward_cfg: RewardConfig | None = None,
                 dt: float = 0.1, max_steps: int = 300,
                 safety_mode: str = "stack"):
        if safety_mode not in ("stack", "passthrough"):
            raise ValueError(f"unknown safety mode {safety_mode!r}")
        self.world = world.validate()
        self.render_cfg = render_cfg or RenderConfig()
        self.safety_cfg = safety_cfg or safety.SafetyConfig()
        self.reward_cfg = reward_cfg or RewardConfig()
        self.dt = dt
        self.max_steps = max_steps
        self.safety_mode = safety_mode
        self.state: RobotState | None = None
        self.step_count = 0
        self._full_scan: np.ndarray | None = None
        self.last_info: dict = {}

    # ------------------------------------------------------------------
    def reset(self, seed: int) -> Observation:
        rng = np.random.default_rng(seed)
        w = self.world
        jitter = rng.uniform(-w.heading_jitter, w.heading_jitter) if w.heading_jitter > 0 else 0.0
        self.state = RobotState(w.start[0], w.start[1],
                                wrap_angle(w.start_heading + jitter))
        self.step_count = 0
        self._prev_exec = safety.STOP
        return self._observe()

    def _observe(self) -> Observation:
        s = self.state
        self._full_scan = raycast(s.x, s.y, s.heading, self.world)
        img, info = render_camera(s.x, s.y, s.heading, self.world, self.render_cfg)
        self.last_info = info
        return Observation(image=img, ranges=subsample(self._full_scan))

    @property
    def full_scan(self) -> np.ndarray:
        return self._full_scan

    # ------------------------------------------------------------------
    def step(self, raw_v: float, raw_w: float):
        """Apply one policy command; returns (obs, reward, event, info)."""
        if self.state is None:
            raise RuntimeError("step() before reset()")
        raw = safety.RawAction(float(raw_v), float(raw_w))
        if self.safety_mode == "stack":
            executed = safety.apply(raw, self._full_scan, self._prev_exec,
                                    self.safety_cfg)
        else:
            executed = safety.apply_identity(raw)
        prev_state = self.state
        new_state = kinematics_step(prev_state, executed, self.dt)
        self.step_count += 1

        collided = self.world.collides(new_state.x, new_state.y)
        reached = (not collided) and self.world.at_goal(new_state.x, new_state.y)
        timed_out = (not collided and not reached
                     and self.step_count >= self.max_steps)
        event = StepEvent(collided=collided, reached_goal=reached,
                          timed_out=timed_out)
        reward = compute_reward(prev_state, new_state, event, self.world,
                                self.reward_cfg)
        self.state = new_state
        self._prev_exec = executed
        obs = self._observe()
        info = {
            "executed": executed,
            "raw": raw,
            "patch_pixels": self.last_info.get("patch_pixels", 0),
            "state": new_state,
        }
        return obs, reward, event, info
