"""Forward camera: pinhole projection of the ground plane plus extruded
obstacles, a seeded procedural floor, the goal marker, and any floor
patches rendered as perspective quads.

Rendering is a pure function of (robot state, world, render config), so
identical inputs always produce identical pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .world import WorldConfig

SKY_COLOR = np.array([0.84, 0.90, 0.95])
FOG_COLOR = np.array([0.70, 0.72, 0.75])
FLOOR_BASE = np.array([0.55, 0.52, 0.50])
GOAL_COLOR = np.array([0.10, 0.85, 0.20])
# one shade per wall (x-min, x-max, y-min, y-max) so the square arena is
# not rotationally ambiguous to the policy
WALL_COLORS = np.array([
    [0.36, 0.36, 0.48],
    [0.46, 0.38, 0.30],
    [0.30, 0.44, 0.34],
    [0.47, 0.32, 0.40],
])
TEXTURE_TILE = 0.25
TEXTURE_AMP = 0.22


@dataclass(frozen=True)
class RenderConfig:
    width: int = 84
    height: int = 84
    hfov: float = math.radians(90.0)
    cam_height: float = 0.15
    pitch: float = math.radians(-15.0)
    far: float = 3.0
    light_gain: float = 1.0


_RAY_CACHE: dict = {}


def _base_rays(cfg: RenderConfig):
    """Per-pixel ray directions for yaw 0, cached per (size, fov, pitch)."""
    key = (cfg.width, cfg.height, round(cfg.hfov, 12), round(cfg.pitch, 12))
    hit = _RAY_CACHE.get(key)
    if hit is not None:
        return hit
    w, h = cfg.width, cfg.height
    th = math.tan(cfg.hfov / 2.0)
    tv = th * h / w
    u_ndc = (np.arange(w) + 0.5 - w / 2.0) / (w / 2.0)
    v_ndc = (np.arange(h) + 0.5 - h / 2.0) / (h / 2.0)
    uu, vv = np.meshgrid(u_ndc, v_ndc)
    sp, cp = math.sin(cfg.pitch), math.cos(cfg.pitch)
    fwd = np.array([cp, 0.0, sp])
    right = np.array([0.0, -1.0, 0.0])
    up = np.array([-sp, 0.0, cp])
    dirs = (fwd[None, None, :]
            + uu[:, :, None] * th * right[None, None, :]
            - vv[:, :, None] * tv * up[None, None, :])
    entry = (dirs[:, :, 0], dirs[:, :, 1], dirs[:, :, 2],
             np.hypot(dirs[:, :, 0], dirs[:, :, 1]))
    _RAY_CACHE[key] = entry
    return entry


def _hash01(ix: np.ndarray, iy: np.ndarray, seed: int) -> np.ndarray:
    """Deterministic per-tile value in [0, 1) from integer tile coords."""
    h = ix.astype(np.uint64) * np.uint64(0x9E3779B97F4A7C15)
    h ^= iy.astype(np.uint64) * np.uint64(0xC2B2AE3D27D4EB4F)
    h ^= np.uint64((seed & 0xFFFFFFFFFFFFFFFF) * 0x165667B19E3779F9 & 0xFFFFFFFFFFFFFFFF)
    h ^= h >> np.uint64(33)
    h *= np.uint64(0xFF51AFD7ED558CCD)
    h ^= h >> np.uint64(33)
    return (h >> np.uint64(11)).astype(np.float64) / float(1 << 53)


def _floor_texture(gx: np.ndarray, gy: np.ndarray, seed: int) -> np.ndarray:
    ix = np.floor(gx / TEXTURE_TILE).astype(np.int64)
    iy = np.floor(gy / TEXTURE_TILE).astype(np.int64)
    fine = _hash01(ix, iy, seed) - 0.5
    cx = np.floor(gx / (4 * TEXTURE_TILE)).astype(np.int64)
    cy = np.floor(gy / (4 * TEXTURE_TILE)).astype(np.int64)
    coarse = _hash01(cx, cy, seed + 101) - 0.5
    lum = 1.0 + TEXTURE_AMP * fine + 0.5 * TEXTURE_AMP * coarse
    return FLOOR_BASE[None, None, :] * lum[:, :, None]


def render_camera(x: float, y: float, heading: float, world: WorldConfig,
                  cfg: RenderConfig) -> tuple[np.ndarray, dict]:
    """Render an [H, W, 3] image in [0, 1]; info carries patch visibility.

    info["patch_pixels"] counts final (unoccluded) pixels whose color was
    sampled from a placed floor patch.
    """
    bdx, bdy, dz, nxy = _base_rays(cfg)
    ct, st = math.cos(heading), math.sin(heading)
    dx = bdx * ct - bdy * st
    dy = bdx * st + bdy * ct
    h, w = cfg.height, cfg.width
    img = np.empty((h, w, 3))
    img[:] = SKY_COLOR

    below = dz < 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        t_ground = np.where(below, -cfg.cam_height / dz, np.inf)
    gx = x + t_ground * dx
    gy = y + t_ground * dy
    planar = t_ground * nxy

    xmin, ymin, xmax, ymax = world.bounds
    inside = (gx >= xmin) & (gx <= xmax) & (gy >= ymin) & (gy <= ymax)
    img[below] = FOG_COLOR

    floor_ok = below & inside & (planar <= cfg.far)
    tex = _floor_texture(gx, gy, world.texture_seed)
    img = np.where(floor_ok[:, :, None], tex, img)

    goal_hit = floor_ok & (np.hypot(gx - world.goal[0], gy - world.goal[1])
                           <= world.goal_radius)
    img[goal_hit] = GOAL_COLOR

    # floor patches: perspective comes for free from the ground intersection
    patch_mask = np.zeros((h, w), dtype=bool)
    ground_vis = below & inside
    for p in world.patches:
        cyw, syw = math.cos(p.yaw), math.sin(p.yaw)
        lx = (gx - p.cx) * cyw + (gy - p.cy) * syw
        ly = -(gx - p.cx) * syw + (gy - p.cy) * cyw
        on = ground_vis & (np.abs(lx) <= p.side / 2) & (np.abs(ly) <= p.side / 2)
        if not on.any():
            continue
        ph, pw = p.pixels.shape[:2]
        col = np.clip(((lx[on] / p.side + 0.5) * pw).astype(np.int64), 0, pw - 1)
        row = np.clip(((0.5 - ly[on] / p.side) * ph).astype(np.int64), 0, ph - 1)
        img[on] = p.pixels[row, col]
        patch_mask |= on

    # ground hits participate in depth compositing only inside the arena
    t_best = np.where(ground_vis, t_ground, np.inf)

    # arena walls
    with np.errstate(divide="ignore", invalid="ignore"):
        tx = np.where(dx > 0, (xmax - x) / dx, (xmin - x) / dx)
        ty = np.where(dy > 0, (ymax - y) / dy, (ymin - y) / dy)
    tx = np.where(dx == 0.0, np.inf, tx)
    ty = np.where(dy == 0.0, np.inf, ty)
    t_wall = np.minimum(tx, ty)
    z_wall = cfg.cam_height + t_wall * dz
    wall_hit = (z_wall >= 0.0) & (z_wall <= world.wall_height) & (t_wall < t_best)
    side_idx = np.where(tx < ty,
                        np.where(dx > 0, 1, 0),
                        np.where(dy > 0, 3, 2))
    if wall_hit.any():
        shade = np.clip(1.15 / (1.0 + 0.30 * t_wall * nxy), 0.35, 1.0)
        img[wall_hit] = (WALL_COLORS[side_idx[wall_hit]]
                         * shade[wall_hit][:, None])
        patch_mask &= ~wall_hit
        t_best = np.where(wall_hit, t_wall, t_best)

    for c in world.circles:
        ox, oy = x - c.cx, y - c.cy
        a = dx * dx + dy * dy
        b = dx * ox + dy * oy
        disc = b * b - a * (ox * ox + oy * oy - c.r * c.r)
        ok = disc >= 0.0
        root = np.sqrt(np.where(ok, disc, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(ok, (-b - root) / a, np.inf)
        zc = cfg.cam_height + t * dz
        hit = ok & (t > 1e-9) & (zc <= c.height) & (t < t_best)
        if hit.any():
            shade = np.clip(1.15 / (1.0 + 0.30 * t * nxy), 0.35, 1.0)
            img[hit] = np.asarray(c.color) * shade[hit][:, None]
            patch_mask &= ~hit
            t_best = np.where(hit, t, t_best)

    for bx in world.boxes:
        with np.errstate(divide="ignore", invalid="ignore"):
            tx0 = (bx.x0 - x) / dx
            tx1 = (bx.x1 - x) / dx
            ty0 = (bx.y0 - y) / dy
            ty1 = (bx.y1 - y) / dy
            tz0 = (0.0 - cfg.cam_height) / dz
            tz1 = (bx.height - cfg.cam_height) / dz
        ten = np.maximum(np.maximum(np.minimum(tx0, tx1), np.minimum(ty0, ty1)),
                         np.minimum(tz0, tz1))
        tex_ = np.minimum(np.minimum(np.maximum(tx0, tx1), np.maximum(ty0, ty1)),
                          np.maximum(tz0, tz1))
        hit = (tex_ >= ten) & (ten > 1e-9) & (ten < t_best)
        if hit.any():
            shade = np.clip(1.15 / (1.0 + 0.30 * ten * nxy), 0.35, 1.0)
            img[hit] = np.asarray(bx.color) * shade[hit][:, None]
            patch_mask &= ~hit
            t_best = np.where(hit, ten, t_best)

    if cfg.light_gain != 1.0:
        img *= cfg.light_gain
    np.clip(img, 0.0, 1.0, out=img)
    return img, {"patch_pixels": int(patch_mask.sum())}


def project_ground_point(x: float, y: float, heading: float,
                         cfg: RenderConfig, gx: float, gy: float):
    """Map a floor point to (row, col) pixel coordinates.

    Returns (row, col, in_front); coordinates are valid only when
    in_front is True. Used as an independent projection oracle in tests.
    """
    rel = np.array([gx - x, gy - y, -cfg.cam_height])
    sp, cp = math.sin(cfg.pitch), math.cos(cfg.pitch)
    ct, st = math.cos(heading), math.sin(heading)
    fwd = np.array([cp * ct, cp * st, sp])
    right = np.array([st, -ct, 0.0])
    up = np.array([-sp * ct, -sp * st, cp])
    xf = float(rel @ fwd)
    if xf <= 1e-9:
        return 0.0, 0.0, False
    th = math.tan(cfg.hfov / 2.0)
    tv = th * cfg.height / cfg.width
    u_ndc = (rel @ right) / xf / th
    v_ndc = -(rel @ up) / xf / tv
    col = u_ndc * cfg.width / 2.0 + cfg.width / 2.0 - 0.5
    row = v_ndc * cfg.height / 2.0 + cfg.height / 2.0 - 0.5
    return float(row), float(col), True
