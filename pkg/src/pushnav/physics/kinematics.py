"""Unicycle / differential-drive kinematics for the robot base."""
from __future__ import annotations

import math

import numpy as np

from .body import wrap_angle

WHEEL_BASE = 0.16  # m, TurtleBot3 Burger track width


def integrate_unicycle(pose, v_fwd: float, omega: float, dt: float) -> np.ndarray:
    """Exact constant-twist arc integration of (x, y, theta)."""
    x, y, th = pose
    if abs(omega) < 1e-6:
        return np.array([x + v_fwd * math.cos(th) * dt, y + v_fwd * math.sin(th) * dt, wrap_angle(th)])
    r = v_fwd / omega
    th1 = th + omega * dt
    return np.array(
        [
            x + r * (math.sin(th1) - math.sin(th)),
            y - r * (math.cos(th1) - math.cos(th)),
            wrap_angle(th1),
        ]
    )


def wheels_to_twist(v_left: float, v_right: float, wheel_base: float = WHEEL_BASE):
    """Wheel rim speeds -> (forward speed, angular rate)."""
    return (v_left + v_right) / 2.0, (v_right - v_left) / wheel_base
