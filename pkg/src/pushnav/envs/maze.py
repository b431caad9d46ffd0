"""Maze navigation among movable obstacles."""
from __future__ import annotations

import math

import numpy as np

from ..physics import Body, Role, box
from .base import Environment
from .config import InvalidSpec
from .generation import place_bodies
from .static_map import GoalDisc

ARENA = (6.0, 6.0)
GOAL_RADIUS = 0.3
WALL_T = 0.2

# Internal wall segments per layout: (center, (w, h)). The "open" layout has
# none and runs start -> goal straight across the arena.
LAYOUTS = {
    "open": {
        "walls": [],
        "start": (0.6, 3.0, 0.0),
        "goal": (5.4, 3.0),
    },
    "U": {
        # long dead-end wall: path must loop around its right end
        "walls": [((2.25, 3.0), (4.5, WALL_T))],
        "start": (0.6, 0.6, math.pi / 2),
        "goal": (0.6, 5.4),
    },
    "S": {
        "walls": [((2.25, 2.0), (4.5, WALL_T)), ((3.75, 4.0), (4.5, WALL_T))],
        "start": (0.6, 0.6, 0.0),
        "goal": (5.4, 5.4),
    },
    "Z": {
        "walls": [((3.75, 2.0), (4.5, WALL_T)), ((2.25, 4.0), (4.5, WALL_T))],
        "start": (5.4, 0.6, math.pi),
        "goal": (0.6, 5.4),
    },
}


class MazeEnv(Environment):
    kind = "maze"

    def __init__(self, spec):
        super().__init__(spec)
        if spec.variant not in LAYOUTS:
            raise InvalidSpec(f"variant: unknown maze layout {spec.variant!r}; have {sorted(LAYOUTS)}")

    def _build(self, rng):
        layout = LAYOUTS[self.spec.variant]
        lo, hi = (0.0, 0.0), ARENA
        walls, next_id = self._make_walls(lo, hi, WALL_T, next_id=1)
        for b in walls:
            self.world.add(b)
        for (cx, cy), (w, h) in layout["walls"]:
            self.world.add(Body.make(next_id, box(w, h), Role.WALL, np.array([cx, cy, 0.0])))
            next_id += 1

        goal = layout["goal"] if self.spec.fixed_layout is None else tuple(
            self.spec.fixed_layout.get("goal", layout["goal"])
        )
        self._finish_build((lo[0] - WALL_T, lo[1] - WALL_T), (hi[0] + WALL_T, hi[1] + WALL_T),
                           GoalDisc(goal, GOAL_RADIUS))

        if self.spec.fixed_layout is not None:
            start = self.spec.fixed_layout.get("robot", layout["start"])
        else:
            start = layout["start"]
        next_id = self._make_robot(start, next_id)

        n = self.spec.obstacles
        if self.spec.fixed_layout is not None and "boxes" in self.spec.fixed_layout:
            for pose in self.spec.fixed_layout["boxes"]:
                self.world.add(
                    Body.make(next_id, box(self.spec.box_size, self.spec.box_size), Role.BOX, np.asarray(pose, float))
                )
                next_id += 1
        elif n > 0:
            n_wheeled = int(round(n * self.spec.wheeled_fraction))
            shapes = [
                (box(self.spec.box_size, self.spec.box_size),
                 Role.WHEELED_BOX if i < n_wheeled else Role.BOX)
                for i in range(n)
            ]
            avoid = [(b.shape, b.pose) for b in self.world.bodies]
            # keep the goal disc clear so obstacles never spawn on it
            from ..physics.shapes import Disc

            avoid.append((Disc(GOAL_RADIUS), np.array([goal[0], goal[1], 0.0])))
            placed, next_id = place_bodies(rng, shapes, lo, hi, avoid, next_id)
            for b in placed:
                self.world.add(b)

    def _check_terminated(self):
        return self.static_map.goal.contains(self._robot.position)

    def _reward(self, events, terminated):
        r = self.spec.reward
        out = r.c_dist * events["robot_goal_decrement"]
        out -= r.c_coll * events["new_movable_contacts"]
        if terminated:
            out += r.r_terminal
        return out
