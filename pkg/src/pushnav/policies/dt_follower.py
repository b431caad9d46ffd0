"""Greedy goal-distance-field descent."""
from __future__ import annotations

import dataclasses

from ..observation import geodesic_distance_field
from .base import Policy, descent_direction, steer_to_heading
from .rrt import inflated_occupancy


class DTFollowerPolicy(Policy):
    """Steers along the steepest descent of the goal distance field.

    Purely reactive: probes the field around the robot each step and turns
    toward the lowest value. The field is recomputed on reset over a static
    map inflated by the robot radius, so descent never routes the robot
    center closer to a wall than its body allows. Works in any action mode;
    ignores movable obstacles (relies on the bumper to push through them).
    """

    name = "dt_follower"

    def __init__(self):
        self._field = None
        self._smap = None

    def reset(self, env, seed: int = None):
        smap = env.static_map
        grid = inflated_occupancy(smap, [], env.robot.shape.bounding_radius())
        cells = smap.goal_cells()
        free = ~grid[cells[:, 0], cells[:, 1]]
        if free.any():  # keep goal cells reachable after inflation
            cells = cells[free]
        self._smap = dataclasses.replace(smap, grid=grid)
        self._field = geodesic_distance_field(self._smap, cells)

    def act(self, observation, env):
        heading = descent_direction(
            env, env.robot.position, field=self._field, smap=self._smap
        )
        if heading is None:  # already at the goal plateau
            heading = env.robot.theta
        return steer_to_heading(env, heading)
