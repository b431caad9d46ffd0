"""Robot collision outlines: disc chassis plus interchangeable front bumpers.

The chassis is a 0.105 m disc (TurtleBot3 Burger footprint); the robot's
forward direction is +x in the body frame. Curved bumpers are approximated
by short convex polygons so the whole outline stays a union of convex parts.
"""
from __future__ import annotations

import math

import numpy as np

from .shapes import Compound, ConvexPolygon, Disc

CHASSIS_RADIUS = 0.105
ROBOT_MASS = 1.0

BUMPER_NAMES = ("pusher", "collector", "navigator", "none")


def _pusher_parts():
    # straight-edge plate ahead of the chassis
    return [
        ConvexPolygon(
            [(0.08, -0.13), (0.13, -0.13), (0.13, 0.13), (0.08, 0.13)]
        )
    ]


def _collector_parts():
    # inward-curved scoop: back plate plus two forward wings tilting inward
    back = ConvexPolygon([(0.08, -0.15), (0.12, -0.15), (0.12, 0.15), (0.08, 0.15)])
    left = ConvexPolygon([(0.10, 0.11), (0.24, 0.10), (0.26, 0.13), (0.10, 0.15)])
    right = ConvexPolygon([(0.10, -0.15), (0.26, -0.13), (0.24, -0.10), (0.10, -0.11)])
    return [back, left, right]


def _navigator_parts():
    # outward-curved bump: circular-arc segment bulging forward
    r = 0.17
    angles = np.linspace(-math.pi / 3, math.pi / 3, 9)
    arc = [(r * math.cos(a), r * math.sin(a)) for a in angles]
    back = [(0.06, r * math.sin(math.pi / 3)), (0.06, -r * math.sin(math.pi / 3))]
    return [ConvexPolygon(arc + back)]


def robot_shape(bumper: str = "pusher") -> Compound:
    chassis = Disc(CHASSIS_RADIUS)
    if bumper == "none":
        return Compound([chassis])
    if bumper == "pusher":
        parts = _pusher_parts()
    elif bumper == "collector":
        parts = _collector_parts()
    elif bumper == "navigator":
        parts = _navigator_parts()
    else:
        raise ValueError(f"unknown bumper {bumper!r}; choose from {BUMPER_NAMES}")
    return Compound([chassis] + parts)
