from .autodiff import (
    LOG_2PI,
    ShapeError,
    Tensor,
    concat,
    dense,
    gaussian_log_prob,
    gradients,
    minimum,
    mse,
    parameter,
    uniform_fan_in,
)
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .conv import conv2d, conv2d_forward, conv_output_size
from .optim import Adam

__all__ = [
    "LOG_2PI", "ShapeError", "Tensor", "concat", "dense", "gaussian_log_prob",
    "gradients", "minimum", "mse", "parameter", "uniform_fan_in",
    "CheckpointError", "load_checkpoint", "save_checkpoint",
    "conv2d", "conv2d_forward", "conv_output_size", "Adam",
]
