"""Planar range scanner: 360 analytic ray casts plus uniform subsampling."""

from __future__ import annotations

import numpy as np

from .world import WorldConfig

N_RAYS = 360
SUBSAMPLE = 10          # every 10th ray starting at index 0 -> 36 values
MAX_RANGE = 3.5


def raycast(x: float, y: float, heading: float, world: WorldConfig,
            max_range: float = MAX_RANGE) -> np.ndarray:
    """Full 360-ray scan; ray i points at heading + i*(2*pi/360)."""
    angles = heading + np.arange(N_RAYS) * (2.0 * np.pi / N_RAYS)
    dx = np.cos(angles)
    dy = np.sin(angles)
    best = np.full(N_RAYS, max_range)

    for c in world.circles:
        ox, oy = x - c.cx, y - c.cy
        b = dx * ox + dy * oy
        disc = b * b - (ox * ox + oy * oy - c.r * c.r)
        valid = disc >= 0.0
        root = np.sqrt(np.where(valid, disc, 0.0))
        t1 = -b - root
        t2 = -b + root
        t = np.where(t1 > 1e-12, t1, t2)      # nearest positive root
        hit = valid & (t > 1e-12)
        best = np.where(hit, np.minimum(best, t), best)

    for b_ in world.boxes:
        best = np.minimum(best, _aabb_enter(x, y, dx, dy, b_.x0, b_.y0, b_.x1, b_.y1))

    if world.bounds is not None:
        best = np.minimum(best, _aabb_exit(x, y, dx, dy, *world.bounds))
    return np.minimum(best, max_range)


def _aabb_enter(x, y, dx, dy, x0, y0, x1, y1) -> np.ndarray:
    """Entry distance into a rectangle seen from outside (inf if missed)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        tx0 = (x0 - x) / dx
        tx1 = (x1 - x) / dx
        ty0 = (y0 - y) / dy
        ty1 = (y1 - y) / dy
    tmin = np.maximum(np.minimum(tx0, tx1), np.minimum(ty0, ty1))
    tmax = np.minimum(np.maximum(tx0, tx1), np.maximum(ty0, ty1))
    hit = (tmax >= tmin) & (tmin > 1e-12)
    return np.where(hit, tmin, np.inf)


def _aabb_exit(x, y, dx, dy, x0, y0, x1, y1) -> np.ndarray:
    """Exit distance out of a rectangle seen from inside."""
    with np.errstate(divide="ignore", invalid="ignore"):
        tx = np.where(dx > 0, (x1 - x) / dx, (x0 - x) / dx)
        ty = np.where(dy > 0, (y1 - y) / dy, (y0 - y) / dy)
    tx = np.where(dx == 0.0, np.inf, tx)
    ty = np.where(dy == 0.0, np.inf, ty)
    return np.minimum(tx, ty)


def subsample(scan: np.ndarray) -> np.ndarray:
    """36-d policy input: scan indices 0, 10, ..., 350."""
    return scan[::SUBSAMPLE].copy()
