"""Adapter turning held-key state into actions for any action mode."""
from __future__ import annotations

import math

from .base import Policy

ARROWS = ("up", "down", "left", "right")


class TeleopPolicy(Policy):
    """Maps the operator's currently held arrow keys to one action.

    angular: left/right select +/- omega_max (up/forward is implicit — the
    robot always drives at v0 in this mode).
    heading: the key combination picks one of eight compass headings.
    wheels: up/down drive both wheels, left/right spin in place.
    """

    name = "teleop"

    def __init__(self):
        self.keys = frozenset()

    def reset(self, env, seed=None):
        self.keys = frozenset()

    def set_keys(self, keys):
        self.keys = frozenset(k for k in keys if k in ARROWS)

    def act(self, observation, env):
        mode = env.spec.action_mode
        k = self.keys
        if mode == "angular":
            omega = 0.0
            if "left" in k:
                omega += env.spec.omega_max
            if "right" in k:
                omega -= env.spec.omega_max
            return omega
        if mode == "wheels":
            v0 = env.spec.v0
            fwd = ("up" in k) - ("down" in k)
            turn = ("left" in k) - ("right" in k)
            return (fwd * v0 - turn * v0, fwd * v0 + turn * v0)
        # heading: 8-way compass from the key combination
        dx = ("right" in k) - ("left" in k)
        dy = ("up" in k) - ("down" in k)
        if dx == 0 and dy == 0:
            return float(env.robot.theta)
        return math.atan2(dy, dx)
