"""Arena description and planar geometry for the navigation world."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float
    height: float = 0.30
    color: tuple = (0.75, 0.20, 0.15)


@dataclass(frozen=True)
class Box:
    x0: float
    y0: float
    x1: float
    y1: float
    height: float = 0.30
    color: tuple = (0.20, 0.30, 0.70)


@dataclass(frozen=True)
class PlacedPatch:
    """A printed patch lying flat on the floor."""
    pixels: np.ndarray          # [ph, pw, 3] in [0, 1]
    cx: float
    cy: float
    yaw: float = 0.0
    side: float = 0.30          # edge length in meters

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"patch pixels must be [h,w,3], got {px.shape}")
        object.__setattr__(self, "pixels", px)


@dataclass(frozen=True)
class WorldConfig:
    bounds: tuple = (0.0, 0.0, 4.0, 4.0)       # xmin, ymin, xmax, ymax
    start: tuple = (0.5, 2.0)
    start_heading: float = 0.0
    heading_jitter: float = 0.30                # uniform +- bound, radians
    goal: tuple = (3.5, 2.0)
    goal_radius: float = 0.20
    circles: tuple = (Circle(2.4, 2.0, 0.25),)
    boxes: tuple = ()
    robot_radius: float = 0.105
    wall_height: float = 0.35
    texture_seed: int = 0
    patches: tuple = ()                          # PlacedPatch instances

    def validate(self) -> "WorldConfig":
        xmin, ymin, xmax, ymax = self.bounds
        for label, (px, py) in (("start", self.start), ("goal", self.goal)):
            if not (xmin < px < xmax and ymin < py < ymax):
                raise ValueError(f"{label} {px, py} outside bounds {self.bounds}")
        if self.collides(*self.start):
            raise ValueError(f"start {self.start} intersects an obstacle")
        return self

    def with_patches(self, patches) -> "WorldConfig":
        return replace(self, patches=tuple(patches))

    # -- geometry ------------------------------------------------------
    def collides(self, x: float, y: float, radius: float | None = None) -> bool:
        """Does a robot disc at (x, y) intersect any obstacle or leave bounds?"""
        r = self.robot_radius if radius is None else radius
        xmin, ymin, xmax, ymax = self.bounds
        if x - r < xmin or x + r > xmax or y - r < ymin or y + r > ymax:
            return True
        for c in self.circles:
            if math.hypot(x - c.cx, y - c.cy) < r + c.r:
                return True
        for b in self.boxes:
            qx = min(max(x, b.x0), b.x1)
            qy = min(max(y, b.y0), b.y1)
            if math.hypot(x - qx, y - qy) < r:
                return True
        return False

    def at_goal(self, x: float, y: float) -> bool:
        return math.hypot(x - self.goal[0], y - self.goal[1]) <= self.goal_radius

    def dist_to_goal(self, x: float, y: float) -> float:
        return math.hypot(x - self.goal[0], y - self.goal[1])


@dataclass
class RobotState:
    x: float
    y: float
    heading: float      # wrapped to (-pi, pi]
    v: float = 0.0      # currently executed linear velocity
    w: float = 0.0      # currently executed angular velocity


@dataclass(frozen=True)
class StepEvent:
    collided: bool = False
    reached_goal: bool = False
    timed_out: bool = False

    @property
    def any(self) -> bool:
        return self.collided or self.reached_goal or self.timed_out

    def label(self) -> str:
        if self.collided:
            return "collision"
        if self.reached_goal:
            return "goal"
        if self.timed_out:
            return "timeout"
        return ""


def wrap_angle(theta: float) -> float:
    """Wrap to (-pi, pi]."""
    r = math.fmod(theta + math.pi, 2.0 * math.pi)
    if r <= 0.0:
        r += 2.0 * math.pi
    return r - math.pi
