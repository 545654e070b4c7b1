"""Black-box executed-action filter between the policy and the robot base.

Pipeline order is fixed: clamp -> smooth -> slew-limit -> forward-cone
braking. Braking runs last so nothing can re-raise a vetoed velocity.
Angular velocity is clamped and smoothed but never braked (rotating in
place cannot collide for a disc robot).

Attack-side code must never import this module directly; commands pass
through it only inside the environment step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RawAction:
    v: float
    w: float


@dataclass(frozen=True)
class ExecutedAction:
    v: float
    w: float


STOP = ExecutedAction(0.0, 0.0)


@dataclass(frozen=True)
class SafetyConfig:
    """TurtleBot-class limits; the mechanisms come from the deployment
    contract, the constants are ours."""
    v_max: float = 0.22
    w_max: float = 2.84
    smoothing: float = 0.6          # lambda: exec = lam*prev + (1-lam)*cmd
    slew_v: float = 0.05            # max |delta v| per step, m/s
    d_brake: float = 0.15           # emergency stop below this cone range, m
    d_slow: float = 0.40            # linear slowdown starts here, m
    cone_half_angle: float = math.radians(30.0)

    def __post_init__(self):
        if not 0.0 < self.d_brake < self.d_slow:
            raise ValueError(f"need 0 < d_brake < d_slow, got {self.d_brake}, {self.d_slow}")
        if not 0.0 <= self.smoothing < 1.0:
            raise ValueError(f"smoothing must be in [0,1), got {self.smoothing}")


def cone_min_range(scan: np.ndarray, half_angle: float) -> float:
    """Minimum range over the forward cone of a 360-ray scan.

    Ray i points at heading + i*(2*pi/360); the cone spans +-half_angle
    around ray 0.
    """
    if scan.shape != (360,):
        raise ValueError(f"expected a 360-ray scan, got shape {scan.shape}")
    n = int(math.floor(math.degrees(half_angle)))
    idx = np.concatenate([np.arange(0, n + 1), np.arange(360 - n, 360)])
    return float(scan[idx].min())


def apply(raw: RawAction, scan: np.ndarray, prev: ExecutedAction,
          cfg: SafetyConfig) -> ExecutedAction:
    """Filter one command. Pure function of (raw, scan, prev, cfg)."""
    v_cmd, w_cmd = raw.v, raw.w
    if not (math.isfinite(v_cmd) and math.isfinite(w_cmd)):
        v_cmd, w_cmd = 0.0, 0.0  # defensive: never forward NaN to the base

    # 1. velocity limits
    v = min(max(v_cmd, -cfg.v_max), cfg.v_max)
    w = min(max(w_cmd, -cfg.w_max), cfg.w_max)

    # 2. exponential smoothing against the previously executed command
    lam = cfg.smoothing
    v = lam * prev.v + (1.0 - lam) * v
    w = lam * prev.w + (1.0 - lam) * w

    # 3. slew limit on linear velocity
    dv = v - prev.v
    if abs(dv) > cfg.slew_v:
        v = prev.v + math.copysign(cfg.slew_v, dv)

    # 4. forward-cone collision logic; reverse motion is unaffected
    if v > 0.0:
        r = cone_min_range(scan, cfg.cone_half_angle)
        if r < cfg.d_brake:
            v = 0.0
        elif r < cfg.d_slow:
            v *= (r - cfg.d_brake) / (cfg.d_slow - cfg.d_brake)
    return ExecutedAction(v, w)


def apply_identity(raw: RawAction, scan: np.ndarray | None = None,
                   prev: ExecutedAction | None = None,
                   cfg: SafetyConfig | None = None) -> ExecutedAction:
    """Stack-disabled passthrough used to measure unfiltered attack strength."""
    if not (math.isfinite(raw.v) and math.isfinite(raw.w)):
        raise ValueError(f"non-finite raw action {raw}")
    return ExecutedAction(raw.v, raw.w)
