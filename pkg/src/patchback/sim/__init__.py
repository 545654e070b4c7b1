from .camera import RenderConfig, project_ground_point, render_camera
from .env import NavEnv, Observation, RewardConfig, compute_reward, kinematics_step
from .lidar import MAX_RANGE, raycast, subsample
from .world import (
    Box,
    Circle,
    PlacedPatch,
    RobotState,
    StepEvent,
    WorldConfig,
    wrap_angle,
)

__all__ = [
    "RenderConfig", "project_ground_point", "render_camera",
    "NavEnv", "Observation", "RewardConfig", "compute_reward", "kinematics_step",
    "MAX_RANGE", "raycast", "subsample",
    "Box", "Circle", "PlacedPatch", "RobotState", "StepEvent", "WorldConfig",
    "wrap_angle",
]
