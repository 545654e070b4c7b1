"""Executed-action filter: pipeline arithmetic and safety invariants."""

import math

import numpy as np
import pytest

from patchback.safety import (
    ExecutedAction,
    RawAction,
    SafetyConfig,
    apply,
    apply_identity,
    cone_min_range,
)

CLEAR = np.full(360, 3.5)


def test_fixed_point_of_smoothing():
    cfg = SafetyConfig(smoothing=0.5)
    out = apply(RawAction(0.1, 0.0), CLEAR, ExecutedAction(0.1, 0.0), cfg)
    assert out.v == pytest.approx(0.1)
    assert out.w == pytest.approx(0.0)


def test_clamp_then_smooth_from_rest():
    cfg = SafetyConfig(v_max=0.22, smoothing=0.0, slew_v=1.0)
    out = apply(RawAction(5.0, 0.0), CLEAR, ExecutedAction(0.0, 0.0), cfg)
    assert out.v == pytest.approx(0.22)


def test_emergency_brake_zeroes_forward_velocity():
    cfg = SafetyConfig(d_brake=0.15)
    scan = CLEAR.copy()
    scan[0] = 0.10
    out = apply(RawAction(0.2, 0.0), scan, ExecutedAction(0.2, 0.0), cfg)
    assert out.v == 0.0


def test_slowdown_scales_linearly():
    cfg = SafetyConfig(smoothing=0.0, slew_v=10.0, d_brake=0.15, d_slow=0.40)
    scan = CLEAR.copy()
    scan[5] = 0.275  # halfway between d_brake and d_slow
    out = apply(RawAction(0.2, 0.0), scan, ExecutedAction(0.2, 0.0), cfg)
    assert out.v == pytest.approx(0.1)


def test_reverse_velocity_not_braked():
    cfg = SafetyConfig(smoothing=0.0, slew_v=10.0)
    scan = CLEAR.copy()
    scan[0] = 0.05
    out = apply(RawAction(-0.1, 0.0), scan, ExecutedAction(-0.1, 0.0), cfg)
    assert out.v == pytest.approx(-0.1)


def test_slew_limits_acceleration():
    cfg = SafetyConfig(smoothing=0.0, slew_v=0.05)
    out = apply(RawAction(0.22, 0.0), CLEAR, ExecutedAction(0.0, 0.0), cfg)
    assert out.v == pytest.approx(0.05)


def test_nan_raw_action_substituted_by_stop_command():
    cfg = SafetyConfig(smoothing=0.0)
    out = apply(RawAction(float("nan"), 1.0), CLEAR, ExecutedAction(0.0, 0.0), cfg)
    assert out.v == 0.0 and out.w == 0.0


def test_output_always_within_limits():
    cfg = SafetyConfig()
    rng = np.random.default_rng(0)
    prev = ExecutedAction(0.0, 0.0)
    for _ in range(200):
        raw = RawAction(float(rng.uniform(-10, 10)), float(rng.uniform(-20, 20)))
        scan = rng.uniform(0.05, 3.5, 360)
        prev = apply(raw, scan, prev, cfg)
        assert abs(prev.v) <= cfg.v_max + 1e-12
        assert abs(prev.w) <= cfg.w_max + 1e-12


def test_braking_is_monotone_in_cone_range():
    cfg = SafetyConfig(smoothing=0.0, slew_v=10.0)
    prev = ExecutedAction(0.2, 0.0)
    raw = RawAction(0.2, 0.0)
    last_v = math.inf
    for r in np.linspace(3.0, 0.05, 40):
        scan = CLEAR.copy()
        scan[350] = r
        v = apply(raw, scan, prev, cfg).v
        assert v <= last_v + 1e-12
        last_v = v


def test_purity_no_hidden_state():
    cfg = SafetyConfig()
    scan = np.full(360, 1.0)
    a = apply(RawAction(0.3, 1.0), scan, ExecutedAction(0.1, 0.2), cfg)
    b = apply(RawAction(0.3, 1.0), scan, ExecutedAction(0.1, 0.2), cfg)
    assert a == b


def test_cone_uses_wrapped_indices():
    scan = np.full(360, 3.5)
    scan[359] = 0.2  # one degree to the right of dead ahead
    assert cone_min_range(scan, math.radians(30)) == pytest.approx(0.2)
    scan2 = np.full(360, 3.5)
    scan2[180] = 0.1  # directly behind: outside the cone
    assert cone_min_range(scan2, math.radians(30)) == pytest.approx(3.5)


def test_identity_returns_raw_unmodified():
    assert apply_identity(RawAction(0.2, -1.0)) == ExecutedAction(0.2, -1.0)
    assert apply_identity(RawAction(10.0, 10.0)) == ExecutedAction(10.0, 10.0)


def test_identity_matches_raw_for_random_inputs():
    rng = np.random.default_rng(4)
    for _ in range(50):
        v, w = rng.uniform(-5, 5, 2)
        out = apply_identity(RawAction(float(v), float(w)))
        assert (out.v, out.w) == (v, w)


def test_config_validation():
    with pytest.raises(ValueError):
        SafetyConfig(d_brake=0.5, d_slow=0.4)
    with pytest.raises(ValueError):
        SafetyConfig(smoothing=1.0)
