"""Uniform policy interface shared by all baselines."""
from __future__ import annotations

import math

import numpy as np

from ..envs.base import sample_field


class Policy:
    """One action per act() call; deterministic given (seed, inputs).

    Policies receive the rendered observation plus the environment as
    privileged state (poses, static map, goal field), which the scripted
    baselines use instead of learned perception.
    """

    name: str = None

    def reset(self, env, seed: int = None) -> None:
        """Bind to a freshly reset environment; clear internal state."""

    def act(self, observation, env):
        raise NotImplementedError


class StationaryPolicy(Policy):
    """Emits the no-op for the bound action mode (useful for truncation tests)."""

    name = "stationary"

    def act(self, observation, env):
        mode = env.spec.action_mode
        if mode == "angular":
            return 0.0
        if mode == "wheels":
            return (0.0, 0.0)
        return float(env.robot.theta)


def descent_direction(env, point, radius: float = 0.15, n_dirs: int = 16, field=None, smap=None):
    """Heading (rad) of steepest goal-field descent around `point`.

    Probes `n_dirs` compass points at `radius` and returns the bearing of the
    lowest sample; None when the field is locally flat (already at the goal).
    An explicit (field, smap) pair overrides the environment's own goal
    field; probes landing on blocked cells of that map are never chosen.
    """
    if field is None:
        field, smap = env.goal_field, env.static_map
    here = sample_field(field, smap, point)
    angles = np.linspace(-math.pi, math.pi, n_dirs, endpoint=False)
    best, best_val = None, here - 1e-9
    for a in angles:
        p = (point[0] + radius * math.cos(a), point[1] + radius * math.sin(a))
        row, col = smap.world_to_cell(p)
        if not smap.in_bounds(row, col) or smap.grid[row, col]:
            continue
        v = sample_field(field, smap, p)
        if v < best_val:
            best, best_val = float(a), v
    return best


def steer_to_heading(env, target_heading: float, gain: float = 4.0):
    """Convert a desired absolute heading into the env's native action."""
    from ..physics import wrap_angle
    from ..physics.kinematics import WHEEL_BASE

    mode = env.spec.action_mode
    if mode == "heading":
        return float(target_heading)
    err = wrap_angle(target_heading - env.robot.theta)
    omega = max(-env.spec.omega_max, min(env.spec.omega_max, gain * err))
    if mode == "angular":
        return float(omega)
    # wheels: constant forward speed plus differential term
    v0 = env.spec.v0
    return (v0 - omega * WHEEL_BASE / 2, v0 + omega * WHEEL_BASE / 2)
