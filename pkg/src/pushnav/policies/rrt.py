"""Kinodynamic RRT over unicycle motion primitives, plus path tracking."""
from __future__ import annotations

import math

import cv2
import numpy as np

from ..envs.static_map import GoalDisc, StaticMap
from ..physics import wrap_angle
from ..physics.kinematics import integrate_unicycle
from .base import Policy, steer_to_heading

N_MAX = 20_000
GOAL_BIAS = 0.1
GOAL_TOL = 0.15
PRIMITIVE_DT = 0.25
LOOKAHEAD = 0.3
# Movable obstacles are pushable, so the planner keeps only a fraction of the
# robot radius as clearance around them: paths brush (and nudge) movables
# rather than detour, and interaction effort grows with clutter. Walls keep
# the full radius.
MOVABLE_CLEARANCE = 0.2


class NoPathFound(RuntimeError):
    pass


def inflated_occupancy(
    smap: StaticMap, movables, radius: float, movable_clearance: float = 1.0
) -> np.ndarray:
    """Static grid dilated by the robot radius, with movable bodies stamped
    in as discs (their bounding circles, inflated by ``movable_clearance``
    times the robot radius)."""
    r_px = int(math.ceil(radius / smap.resolution))
    kernel = cv2.getStructuringElement(cv2.MORPH_ELLIPSE, (2 * r_px + 1, 2 * r_px + 1))
    grid = cv2.dilate(smap.grid.astype(np.uint8), kernel)
    for shape, pose in movables:
        row, col = smap.world_to_cell(pose[:2])
        rr = int(
            math.ceil((shape.bounding_radius() + movable_clearance * radius) / smap.resolution)
        )
        cv2.circle(grid, (int(col), int(row)), rr, 1, -1)
    return grid.astype(bool)


def _blocked(occ: np.ndarray, smap: StaticMap, x: float, y: float) -> bool:
    col = int((x - smap.origin[0]) / smap.resolution)
    row = int((y - smap.origin[1]) / smap.resolution)
    if not (0 <= row < occ.shape[0] and 0 <= col < occ.shape[1]):
        return True
    return bool(occ[row, col])


def _segment_blocked(occ, smap, a, b) -> bool:
    d = math.hypot(b[0] - a[0], b[1] - a[1])
    n = max(2, int(d / 0.05) + 1)
    for t in np.linspace(0.0, 1.0, n):
        if _blocked(occ, smap, a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])):
            return True
    return False


def _shortcut(path, occ, smap):
    """Greedy line-of-sight shortcutting of the waypoint list."""
    out = [path[0]]
    i = 0
    while i < len(path) - 1:
        j = len(path) - 1
        while j > i + 1 and _segment_blocked(occ, smap, path[i], path[j]):
            j -= 1
        out.append(path[j])
        i = j
    return out


def rrt_plan(smap, movables, start_pose, goal, rng, v0, omega_max, robot_radius):
    """Plan a pose path from start to the goal set among frozen obstacles.

    Kinodynamic RRT: unicycle primitives at constant v0 with
    omega in {-omega_max, 0, +omega_max} for 0.25 s each; movable obstacles
    are treated as static. Raises NoPathFound after N_MAX iterations.
    """
    occ = inflated_occupancy(smap, movables, robot_radius, MOVABLE_CLEARANCE)
    if isinstance(goal, GoalDisc):
        goal_pt = np.asarray(goal.center, dtype=float)
        reached = lambda p: math.hypot(p[0] - goal_pt[0], p[1] - goal_pt[1]) <= max(GOAL_TOL, goal.radius)
    else:
        rows = np.asarray(smap.goal_cells())
        xs, ys = smap.cell_centers(rows[:, 0], rows[:, 1])
        goal_pt = np.array([xs.mean(), ys.mean()])
        reached = goal.contains

    lo = smap.origin
    hi = smap.origin + np.array([smap.grid.shape[1], smap.grid.shape[0]]) * smap.resolution
    omegas = (-omega_max, 0.0, omega_max)

    poses = np.empty((N_MAX + 1, 3))
    poses[0] = start_pose
    parents = np.empty(N_MAX + 1, dtype=np.int64)
    parents[0] = -1
    n = 1

    for _ in range(N_MAX):
        if rng.random() < GOAL_BIAS:
            sample = goal_pt
        else:
            sample = rng.uniform(lo, hi)
        d2 = (poses[:n, 0] - sample[0]) ** 2 + (poses[:n, 1] - sample[1]) ** 2
        near = int(np.argmin(d2))

        best_pose, best_d = None, math.inf
        for omega in omegas:
            cand = integrate_unicycle(poses[near], v0, omega, PRIMITIVE_DT)
            mid = integrate_unicycle(poses[near], v0, omega, PRIMITIVE_DT / 2)
            if _blocked(occ, smap, mid[0], mid[1]) or _blocked(occ, smap, cand[0], cand[1]):
                continue
            d = math.hypot(cand[0] - sample[0], cand[1] - sample[1])
            if d < best_d:
                best_pose, best_d = cand, d
        if best_pose is None:
            continue
        poses[n] = best_pose
        parents[n] = near
        n += 1

        if reached(best_pose[:2]):
            path = []
            i = n - 1
            while i >= 0:
                path.append(poses[i].copy())
                i = parents[i]
            path.reverse()
            return _shortcut(path, occ, smap)
        if n > N_MAX:
            break
    raise NoPathFound(f"no path to goal after {N_MAX} iterations")


class RRTPolicy(Policy):
    """Plans once per episode with the RRT, then tracks the path by pure
    pursuit (fixed lookahead, proportional steering)."""

    name = "rrt"

    def __init__(self):
        self._path = None
        self._idx = 0

    def reset(self, env, seed=None):
        rng = np.random.default_rng(seed if seed is not None else env.spec.seed)
        movables = [(b.shape, b.pose) for b in env.movables()]
        last_err = None
        for _ in range(3):  # deterministic retries off the same rng stream
            try:
                self._path = rrt_plan(
                    env.static_map,
                    movables,
                    env.robot.pose.copy(),
                    env.static_map.goal,
                    rng,
                    env.spec.v0,
                    env.spec.omega_max,
                    env.robot.shape.bounding_radius(),
                )
                self._idx = 0
                return
            except NoPathFound as err:
                last_err = err
        raise last_err

    def act(self, observation, env):
        pos = env.robot.position
        path = self._path
        # advance the progress index to the nearest not-yet-passed waypoint
        while (
            self._idx < len(path) - 1
            and math.hypot(path[self._idx][0] - pos[0], path[self._idx][1] - pos[1]) < LOOKAHEAD
        ):
            self._idx += 1
        target = path[self._idx]
        heading = math.atan2(target[1] - pos[1], target[0] - pos[0])
        return steer_to_heading(env, heading)
