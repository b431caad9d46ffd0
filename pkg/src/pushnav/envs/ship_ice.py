"""Autonomous ship navigation through a channel of broken ice."""
from __future__ import annotations

import math

import numpy as np

from ..physics import Body, ConvexPolygon, PhysicsParams, Role
from .base import Environment
from .generation import generate_ice_field
from .static_map import GoalLine

CHANNEL_W = 6.0
CHANNEL_L = 12.0
GOAL_Y = 10.0
WALL_T = 0.2
ICE_BAND = ((0.2, 2.0), (5.8, 9.0))  # region populated with floes
SHIP_LENGTH = 1.0


def ship_polygon() -> ConvexPolygon:
    """Boat outline, bow at +x, 1 m long and 0.4 m beam."""
    return ConvexPolygon.centered(
        [
            (-0.5, -0.2),
            (0.2, -0.2),
            (0.5, 0.0),
            (0.2, 0.2),
            (-0.5, 0.2),
        ]
    )


class ShipIceEnv(Environment):
    kind = "ship_ice"

    def _physics_params(self):
        # 2D default has no fluid model; drag is opt-in
        if self.spec.drag:
            return PhysicsParams(drag_enabled=True, c_lin=2.0, c_quad=1.5, c_ang_lin=0.5, c_ang_quad=0.2)
        return PhysicsParams()

    def _build(self, rng):
        lo, hi = (0.0, 0.0), (CHANNEL_W, CHANNEL_L)
        walls, next_id = self._make_walls(lo, hi, WALL_T, next_id=1, sides=("left", "right", "bottom"))
        for b in walls:
            self.world.add(b)
        self._finish_build((-WALL_T, -WALL_T), (CHANNEL_W + WALL_T, CHANNEL_L), GoalLine(GOAL_Y))

        start = (CHANNEL_W / 2, 0.8, math.pi / 2)
        if self.spec.fixed_layout is not None:
            start = self.spec.fixed_layout.get("robot", start)
        robot_id = next_id
        shape = ship_polygon()
        self._robot = Body.make(robot_id, shape, Role.ROBOT, np.asarray(start, float), mass=4.0)
        self._robot.asleep = False
        self.world.add(self._robot)
        next_id += 1

        for floe in generate_ice_field(ICE_BAND[0], ICE_BAND[1], self.spec.ice_concentration, rng, next_id=next_id):
            self.world.add(floe)

    def _check_terminated(self):
        return self._robot.position[1] >= GOAL_Y

    def _reward(self, events, terminated):
        r = self.spec.reward
        out = -r.c_ke * events["floe_ke_gain"]
        v = self._robot.vel
        speed = float(np.linalg.norm(v))
        if speed > 1e-9:
            out += r.c_head * (v[1] / speed)  # cos of angle to +y
        if terminated:
            out += r.r_terminal
        return out
