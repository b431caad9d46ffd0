"""Scripted approach-and-push heuristic for the manipulation environments."""
from __future__ import annotations

import math

import numpy as np

from ..envs.base import sample_field
from ..physics import wrap_angle
from .base import Policy, descent_direction, steer_to_heading

APPROACH_SCALE = 1.5  # approach point sits this many box half-widths behind it
DOCK_TOL = 0.08


class GreedyPushPolicy(Policy):
    """Pick the cheapest incomplete box, line up behind it, push it to goal.

    Target selection minimizes robot-to-approach-point distance plus the
    box's goal distance; ties break toward the lower body id. The approach
    point lies behind the box, opposite its push direction; once docked, the
    emitted heading drives through the box. Replans every step.
    """

    name = "greedy_push"

    def _push_direction(self, env, body):
        if env.kind == "area_clearing":
            # radially outward from the clearance area's center
            g = env.static_map.goal
            cx = (g.lo[0] + g.hi[0]) / 2
            cy = (g.lo[1] + g.hi[1]) / 2
            d = body.position - np.array([cx, cy])
            if np.linalg.norm(d) < 1e-9:
                return 0.0
            return math.atan2(d[1], d[0])
        g = env.static_map.goal
        center = np.array([(g.lo[0] + g.hi[0]) / 2, (g.lo[1] + g.hi[1]) / 2])
        r = body.shape.bounding_radius()
        near_goal = (
            g.lo[0] - r <= body.position[0] <= g.hi[0] + r
            and g.lo[1] - r <= body.position[1] <= g.hi[1] + r
        )
        if near_goal:
            # straddling the receptacle edge: the goal field is flat here, so
            # aim for the center until every vertex is inside
            d = center - body.position
            if np.linalg.norm(d) < 1e-9:
                return 0.0
            return math.atan2(d[1], d[0])
        h = descent_direction(env, body.position)
        if h is None:
            return 0.0
        return self._steer_off_walls(env, body.position, h)

    def _steer_off_walls(self, env, point, heading, margin=0.5):
        """Bend the push direction away from nearby walls so the box is not
        pinned where the robot cannot get behind it."""
        lo, hi = self._arena_bounds(env)
        v = np.array([math.cos(heading), math.sin(heading)])
        for axis in (0, 1):
            d_lo = point[axis] - lo[axis]
            d_hi = hi[axis] - point[axis]
            if d_lo < margin:
                v[axis] += (margin - d_lo) / margin
            if d_hi < margin:
                v[axis] -= (margin - d_hi) / margin
        return math.atan2(v[1], v[0])

    def _arena_bounds(self, env):
        if getattr(self, "_bounds", None) is None:
            smap = env.static_map
            rows, cols = np.nonzero(~smap.grid)
            xs, ys = smap.cell_centers(rows, cols)
            self._bounds = (
                np.array([xs.min(), ys.min()]),
                np.array([xs.max(), ys.max()]),
            )
        return self._bounds

    def reset(self, env, seed=None):
        self._bounds = None

    def _approach_point(self, env, body, push_heading):
        half = body.shape.bounding_radius()
        off = APPROACH_SCALE * half
        return body.position - off * np.array([math.cos(push_heading), math.sin(push_heading)])

    def act(self, observation, env):
        robot = env.robot.position
        best = None
        for b in sorted(env.movables(), key=lambda b: b.id):
            if env._object_completed(b):
                continue
            push = self._push_direction(env, b)
            ap = self._approach_point(env, b, push)
            cost = float(np.linalg.norm(ap - robot)) + sample_field(
                env.goal_field, env.static_map, b.position
            )
            if best is None or cost < best[0] - 1e-12:
                best = (cost, b, push, ap)
        if best is None:  # everything delivered; hold heading, env terminates
            return steer_to_heading(env, float(env.robot.theta))

        _, body, push, approach = best
        rel = body.position - robot
        to_box = float(np.linalg.norm(rel))
        # docked = close behind the box AND on the side opposite its goal,
        # so driving forward moves the box toward the goal rather than away
        behind = to_box > 1e-9 and (rel / to_box) @ np.array(
            [math.cos(push), math.sin(push)]
        ) >= math.cos(math.radians(45))
        docked = behind and (
            float(np.linalg.norm(approach - robot)) <= DOCK_TOL
            or to_box <= APPROACH_SCALE * body.shape.bounding_radius() + DOCK_TOL
        )
        if docked:
            # aligned behind the box: drive through it along the push ray
            heading = push
        else:
            d = approach - robot
            heading = math.atan2(d[1], d[0])
            heading = self._avoid_box(env, robot, approach, body, heading)
        return steer_to_heading(env, heading)

    def _avoid_box(self, env, robot, approach, body, heading):
        """Swerve around the target box when the straight run to the approach
        point would plough through it (which shoves it off-goal)."""
        rel = body.position - robot
        dist = float(np.linalg.norm(rel))
        clearance = body.shape.bounding_radius() + env.robot.shape.bounding_radius() + 0.05
        if dist >= float(np.linalg.norm(approach - robot)) or dist < 1e-9:
            return heading  # box lies beyond the waypoint; closing in is safe
        bearing = math.atan2(rel[1], rel[0])
        off = wrap_angle(heading - bearing)
        if dist > clearance:
            half_cone = math.asin(min(1.0, clearance / dist))
        else:
            half_cone = math.pi / 2
        if abs(off) >= half_cone:
            return heading  # line already clears the box
        # skirt the box on whichever side we were already leaning toward
        side = 1.0 if off >= 0 else -1.0
        return wrap_angle(bearing + side * half_cone)
