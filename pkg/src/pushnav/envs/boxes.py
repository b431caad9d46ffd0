"""Manipulation environments: box delivery and area clearing."""
from __future__ import annotations

import numpy as np

from ..physics import Body, Role, box, transform_points
from .base import Environment
from .generation import place_bodies
from .static_map import GoalRect

ARENA = (5.0, 5.0)
WALL_T = 0.2
RECEPTACLE = ((3.0, 3.0), (4.5, 4.5))
SPAWN_MARGIN = 0.45  # boxes spawn clear of walls so the robot can dock behind
CLEARANCE_RECT = ((1.75, 1.75), (3.25, 3.25))
COLUMN_SIZE = 0.3


class _ManipEnv(Environment):
    """Shared machinery: heading actions, box placement, reward shape."""

    goal_rect: GoalRect = None

    def _box_shapes(self, rng):
        n = self.spec.boxes
        n_wheeled = int(round(n * self.spec.wheeled_fraction))
        return [
            (box(self.spec.box_size, self.spec.box_size),
             Role.WHEELED_BOX if i < n_wheeled else Role.BOX)
            for i in range(n)
        ]

    def _build_static(self, rng):
        lo, hi = (0.0, 0.0), ARENA
        walls, next_id = self._make_walls(lo, hi, WALL_T, next_id=1)
        for b in walls:
            self.world.add(b)
        if self.spec.static_obstacles and self.spec.obstacles > 0:
            # columns are placed by the seeded rng, clear of goal and margins
            shapes = [(box(COLUMN_SIZE, COLUMN_SIZE), Role.WALL) for _ in range(self.spec.obstacles)]
            avoid = [(b.shape, b.pose) for b in self.world.bodies]
            avoid.append(self._goal_keepout())
            placed, next_id = place_bodies(rng, shapes, lo, hi, avoid, next_id, clearance=0.4)
            for b in placed:
                self.world.add(b)
        return lo, hi, next_id

    def _goal_keepout(self):
        glo, ghi = self.goal_rect.lo, self.goal_rect.hi
        poly = box(ghi[0] - glo[0], ghi[1] - glo[1])
        return poly, np.array([(glo[0] + ghi[0]) / 2, (glo[1] + ghi[1]) / 2, 0.0])

    def _place_all(self, rng, lo, hi, next_id, boxes_region, boxes_avoid_goal):
        spec = self.spec
        if spec.fixed_layout is not None:
            next_id = self._make_robot(spec.fixed_layout["robot"], next_id)
            for pose in spec.fixed_layout["boxes"]:
                b = Body.make(next_id, box(spec.box_size, spec.box_size), Role.BOX, np.asarray(pose, float))
                self.world.add(b)
                next_id += 1
            return next_id

        from ..physics import robot_shape

        avoid = [(b.shape, b.pose) for b in self.world.bodies]
        if boxes_avoid_goal:
            avoid_goal = [self._goal_keepout()]
        else:
            avoid_goal = []
        shapes = self._box_shapes(rng)
        placed, next_id = place_bodies(
            rng, shapes, boxes_region[0], boxes_region[1], avoid + avoid_goal, next_id
        )
        for b in placed:
            self.world.add(b)

        robot = robot_shape(spec.bumper)
        avoid_r = [(b.shape, b.pose) for b in self.world.bodies]
        placed_r, _ = place_bodies(
            rng, [(robot, Role.ROBOT)], lo, hi, avoid_r, next_id, clearance=0.05
        )
        return self._make_robot(placed_r[0].pose, next_id)

    def _box_vertices(self, body):
        return transform_points(body.shape.vertices, body.pose)

    def _reward(self, events, terminated):
        r = self.spec.reward
        out = r.c_box * events["object_goal_decrement"]
        out += r.r_done * len(events["completions"])
        out -= r.c_stat * events["new_static_contacts"]
        return out

    def _check_terminated(self):
        return all(self._object_completed(b) for b in self.movables())


class BoxDeliveryEnv(_ManipEnv):
    kind = "box_delivery"
    goal_rect = GoalRect(lo=RECEPTACLE[0], hi=RECEPTACLE[1], mode="interior")

    def _build(self, rng):
        lo, hi, next_id = self._build_static(rng)
        self._finish_build((lo[0] - WALL_T, lo[1] - WALL_T), (hi[0] + WALL_T, hi[1] + WALL_T), self.goal_rect)
        m = SPAWN_MARGIN
        spawn = ((lo[0] + m, lo[1] + m), (hi[0] - m, hi[1] - m))
        self._place_all(rng, lo, hi, next_id, boxes_region=spawn, boxes_avoid_goal=True)

    def _object_completed(self, body):
        glo, ghi = self.goal_rect.lo, self.goal_rect.hi
        pts = np.vstack([self._box_vertices(body), body.position])
        return bool(
            (pts[:, 0] >= glo[0]).all()
            and (pts[:, 0] <= ghi[0]).all()
            and (pts[:, 1] >= glo[1]).all()
            and (pts[:, 1] <= ghi[1]).all()
        )


class AreaClearingEnv(_ManipEnv):
    kind = "area_clearing"
    goal_rect = GoalRect(lo=CLEARANCE_RECT[0], hi=CLEARANCE_RECT[1], mode="boundary")

    def _build(self, rng):
        lo, hi, next_id = self._build_static(rng)
        self._finish_build((lo[0] - WALL_T, lo[1] - WALL_T), (hi[0] + WALL_T, hi[1] + WALL_T), self.goal_rect)
        # boxes start inside the clearance area; the robot starts anywhere free
        self._place_all(
            rng, lo, hi, next_id,
            boxes_region=(self.goal_rect.lo, self.goal_rect.hi),
            boxes_avoid_goal=False,
        )

    def _object_completed(self, body):
        glo, ghi = self.goal_rect.lo, self.goal_rect.hi
        pts = self._box_vertices(body)
        inside = (
            (pts[:, 0] > glo[0])
            & (pts[:, 0] < ghi[0])
            & (pts[:, 1] > glo[1])
            & (pts[:, 1] < ghi[1])
        )
        return not bool(inside.any())
