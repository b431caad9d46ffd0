"""Egocentric grid observations and geodesic distance fields."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import cv2
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .envs.static_map import StaticMap
from .physics import Compound, ConvexPolygon, Disc, Role, transform_points

UNREACHABLE = np.inf

MAZE_CHANNELS = ("static_occupancy", "movable_occupancy", "footprint", "goal_dt")
SHIP_CHANNELS = MAZE_CHANNELS + ("heading",)
MANIP_CHANNELS = ("occupancy", "footprint", "egocentric_dt", "goal_dt")

CHANNELS_BY_KIND = {
    "maze": MAZE_CHANNELS,
    "ship_ice": SHIP_CHANNELS,
    "box_delivery": MANIP_CHANNELS,
    "area_clearing": MANIP_CHANNELS,
}


@dataclass
class ObsConfig:
    window: int = 128          # cells per side, even
    resolution: float = 0.04   # m per cell
    rotate_with_robot: bool = True

    def __post_init__(self):
        if self.window % 2 != 0:
            raise ValueError("observation window must be even-sized")
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")


@dataclass
class Observation:
    tensor: np.ndarray          # (C, H, W) float32 in [0, 1]
    channels: tuple

    def channel(self, name: str) -> np.ndarray:
        return self.tensor[self.channels.index(name)]


def geodesic_distance_field(smap: StaticMap, goal_cells) -> np.ndarray:
    """Per-cell shortest obstacle-avoiding path length (m) to the goal set.

    8-connected Dijkstra with step costs {1, sqrt(2)} * resolution; an edge
    exists iff both endpoint cells are free. Obstacle and unreachable cells
    hold +inf.
    """
    goal_cells = np.asarray(goal_cells)
    if goal_cells.size == 0:
        raise ValueError("goal cell set is empty")
    h, w = smap.grid.shape
    free = ~smap.grid
    n = h * w
    res = smap.resolution

    rows_l, cols_l, data = [], [], []
    # (dr, dc, cost) for half of the 8-neighborhood; dijkstra runs undirected
    for dr, dc, cost in ((0, 1, res), (1, 0, res), (1, 1, res * math.sqrt(2)), (1, -1, res * math.sqrt(2))):
        src = free[max(0, -dr) : h - max(0, dr), max(0, -dc) : w - max(0, dc)]
        dst = free[max(0, dr) : h + min(0, dr), max(0, dc) : w + min(0, dc)]
        ok = src & dst
        r, c = np.nonzero(ok)
        r = r + max(0, -dr)
        c = c + max(0, -dc)
        rows_l.append(r * w + c)
        cols_l.append((r + dr) * w + (c + dc))
        data.append(np.full(len(r), cost))

    # virtual source node n connected to every goal cell at zero cost
    g_idx = goal_cells[:, 0] * w + goal_cells[:, 1]
    g_idx = g_idx[free.ravel()[g_idx]]
    if g_idx.size == 0:
        raise ValueError("all goal cells are inside obstacles")
    rows_l.append(np.full(len(g_idx), n))
    cols_l.append(g_idx)
    data.append(np.zeros(len(g_idx)))

    graph = coo_matrix(
        (np.concatenate(data), (np.concatenate(rows_l), np.concatenate(cols_l))),
        shape=(n + 1, n + 1),
    ).tocsr()
    dist = _csgraph_dijkstra(graph, directed=False, indices=n)[:n].reshape(h, w)
    dist[smap.grid] = UNREACHABLE
    return dist


def normalized_goal_field(field: np.ndarray) -> np.ndarray:
    """Goal DT scaled by its max finite value; unreachable cells -> 1.0."""
    finite = np.isfinite(field)
    out = np.ones_like(field)
    if finite.any():
        m = field[finite].max()
        if m > 0:
            out[finite] = field[finite] / m
        else:
            out[finite] = 0.0
    return out


def _window_world_coords(cfg: ObsConfig, robot_pose, rotate: bool) -> np.ndarray:
    """World xy of every window cell center, shape (H, W, 2). Row 0 = -y edge."""
    n = cfg.window
    offs = (np.arange(n) - n / 2 + 0.5) * cfg.resolution
    gx, gy = np.meshgrid(offs, offs)  # gx: +x right (cols), gy: +y up (rows)
    if rotate:
        th = robot_pose[2]
        c, s = math.cos(th), math.sin(th)
        wx = robot_pose[0] + c * gx - s * gy
        wy = robot_pose[1] + s * gx + c * gy
    else:
        wx = robot_pose[0] + gx
        wy = robot_pose[1] + gy
    return np.stack([wx, wy], axis=-1)


def _sample_grid(grid: np.ndarray, smap: StaticMap, coords: np.ndarray, fill: float) -> np.ndarray:
    cols = np.floor((coords[..., 0] - smap.origin[0]) / smap.resolution).astype(int)
    rows = np.floor((coords[..., 1] - smap.origin[1]) / smap.resolution).astype(int)
    h, w = grid.shape
    inside = (rows >= 0) & (rows < h) & (cols >= 0) & (cols < w)
    out = np.full(coords.shape[:2], fill, dtype=np.float64)
    out[inside] = grid[rows[inside], cols[inside]]
    return out


def _world_to_window(points, robot_pose, cfg: ObsConfig, rotate: bool) -> np.ndarray:
    """World points -> float window pixel coords (x=col, y=row)."""
    p = np.asarray(points, dtype=float) - np.asarray(robot_pose[:2])
    if rotate:
        th = -robot_pose[2]
        c, s = math.cos(th), math.sin(th)
        p = p @ np.array([[c, s], [-s, c]])
    return p / cfg.resolution + cfg.window / 2 - 0.5


def _raster_shape(img, shape, pose, robot_pose, cfg, rotate, value):
    if isinstance(shape, Compound):
        for part in shape.parts:
            _raster_shape(img, part, pose, robot_pose, cfg, rotate, value)
        return
    if isinstance(shape, Disc):
        c = transform_points(shape.center[None, :], pose)[0]
        px = _world_to_window(c[None, :], robot_pose, cfg, rotate)[0]
        cv2.circle(img, (int(round(px[0])), int(round(px[1]))), int(round(shape.radius / cfg.resolution)), value, -1)
        return
    verts = transform_points(shape.vertices, pose)
    px = _world_to_window(verts, robot_pose, cfg, rotate)
    cv2.fillPoly(img, [np.round(px).astype(np.int32)], value)


def render_observation(world, smap: StaticMap, goal_field: np.ndarray, cfg: ObsConfig, env_kind: str) -> Observation:
    """Robot-centered multi-channel observation; all values in [0, 1]."""
    channels = CHANNELS_BY_KIND[env_kind]
    rotate = cfg.rotate_with_robot and env_kind != "ship_ice"
    robot = next(b for b in world.bodies if b.role is Role.ROBOT)
    coords = _window_world_coords(cfg, robot.pose, rotate)

    static_ch = _sample_grid(smap.grid.astype(np.float64), smap, coords, fill=1.0)
    goal_ch = _sample_grid(normalized_goal_field(goal_field), smap, coords, fill=1.0)

    n = cfg.window
    movable = np.zeros((n, n), dtype=np.float64)
    for b in world.bodies:
        if b.role in (Role.BOX, Role.WHEELED_BOX, Role.ICE_FLOE):
            _raster_shape(movable, b.shape, b.pose, robot.pose, cfg, rotate, 1.0)

    footprint = np.zeros((n, n), dtype=np.float64)
    fp_pose = np.array([robot.pose[0], robot.pose[1], 0.0 if rotate else robot.pose[2]])
    _raster_shape(footprint, robot.shape, fp_pose, robot.pose, cfg, rotate, 1.0)

    if env_kind in ("box_delivery", "area_clearing"):
        occupancy = np.where(static_ch > 0.5, 1.0, 0.0)
        occupancy = np.maximum(occupancy, movable * 0.5)
        ego = _egocentric_dt(cfg)
        tensor = np.stack([occupancy, footprint, ego, goal_ch])
    else:
        tensor = np.stack([static_ch, movable, footprint, goal_ch])
        if env_kind == "ship_ice":
            heading = np.zeros((n, n), dtype=np.float64)
            cx = n // 2
            th = 0.0 if rotate else robot.pose[2]
            ex = int(round(cx + math.cos(th) * n))
            ey = int(round(cx + math.sin(th) * n))
            cv2.line(heading, (cx, cx), (ex, ey), 1.0, 1)
            tensor = np.concatenate([tensor, heading[None]])

    tensor = np.clip(tensor, 0.0, 1.0).astype(np.float32)
    return Observation(tensor=tensor, channels=channels)


_EGO_CACHE: dict = {}


def _egocentric_dt(cfg: ObsConfig) -> np.ndarray:
    key = (cfg.window, cfg.resolution)
    if key not in _EGO_CACHE:
        n = cfg.window
        offs = (np.arange(n) - n / 2 + 0.5) * cfg.resolution
        gx, gy = np.meshgrid(offs, offs)
        d = np.sqrt(gx**2 + gy**2)
        half_diag = math.sqrt(2) * (n / 2) * cfg.resolution
        _EGO_CACHE[key] = np.clip(d / half_diag, 0.0, 1.0)
    return _EGO_CACHE[key]
