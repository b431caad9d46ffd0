"""Convex shape primitives for the top-down 2D engine.

All shapes live in a body-local frame. A body is either a single disc,
a single convex polygon, or a compound of convex parts (used for the
robot chassis + bumper). Polygon vertices are counter-clockwise.
"""
from __future__ import annotations

import math

import numpy as np


class ShapeError(ValueError):
    """Raised for degenerate or non-convex shape definitions."""


def polygon_area(verts: np.ndarray) -> float:
    """Signed shoelace area; positive for CCW vertex order."""
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_centroid(verts: np.ndarray) -> np.ndarray:
    x, y = verts[:, 0], verts[:, 1]
    cross = x * np.roll(y, -1) - np.roll(x, -1) * y
    a = 0.5 * np.sum(cross)
    if abs(a) < 1e-12:
        raise ShapeError("zero-area polygon")
    cx = np.sum((x + np.roll(x, -1)) * cross) / (6.0 * a)
    cy = np.sum((y + np.roll(y, -1)) * cross) / (6.0 * a)
    return np.array([cx, cy])


def polygon_inertia(verts: np.ndarray, mass: float) -> float:
    """Moment of inertia about the origin of the vertex frame."""
    num = 0.0
    den = 0.0
    n = len(verts)
    for i in range(n):
        p0 = verts[i]
        p1 = verts[(i + 1) % n]
        cross = abs(p0[0] * p1[1] - p1[0] * p0[1])
        num += cross * (p0 @ p0 + p0 @ p1 + p1 @ p1)
        den += cross
    if den < 1e-12:
        raise ShapeError("zero-area polygon")
    return mass * num / (6.0 * den)


def _check_convex_ccw(verts: np.ndarray) -> None:
    n = len(verts)
    if not 3 <= n <= 32:
        raise ShapeError(f"vertex count {n} outside [3, 32]")
    for i in range(n):
        a = verts[(i + 1) % n] - verts[i]
        b = verts[(i + 2) % n] - verts[(i + 1) % n]
        if a[0] * b[1] - a[1] * b[0] < -1e-10:
            raise ShapeError("polygon is not convex CCW")


class Disc:
    kind = "disc"

    __slots__ = ("radius", "center")

    def __init__(self, radius: float, center=(0.0, 0.0)):
        if radius <= 0:
            raise ShapeError("disc radius must be positive")
        self.radius = float(radius)
        self.center = np.asarray(center, dtype=float)

    @property
    def area(self) -> float:
        return math.pi * self.radius**2

    def inertia(self, mass: float) -> float:
        # about body origin, including offset term
        return 0.5 * mass * self.radius**2 + mass * float(self.center @ self.center)

    def bounding_radius(self) -> float:
        return self.radius + float(np.linalg.norm(self.center))

    def __repr__(self):
        return f"Disc(r={self.radius}, c={tuple(self.center)})"


class ConvexPolygon:
    kind = "polygon"

    __slots__ = ("vertices", "normals")

    def __init__(self, vertices):
        verts = np.asarray(vertices, dtype=float)
        if polygon_area(verts) < 0:
            verts = verts[::-1].copy()
        _check_convex_ccw(verts)
        if polygon_area(verts) < 1e-10:
            raise ShapeError("zero-area polygon")
        self.vertices = verts
        edges = np.roll(verts, -1, axis=0) - verts
        normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
        self.normals = normals / np.linalg.norm(normals, axis=1, keepdims=True)

    @classmethod
    def centered(cls, vertices) -> "ConvexPolygon":
        """Polygon re-anchored so its area centroid is the local origin."""
        verts = np.asarray(vertices, dtype=float)
        return cls(verts - polygon_centroid(verts))

    @property
    def area(self) -> float:
        return abs(polygon_area(self.vertices))

    def inertia(self, mass: float) -> float:
        return polygon_inertia(self.vertices, mass)

    def bounding_radius(self) -> float:
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))

    def __repr__(self):
        return f"ConvexPolygon({len(self.vertices)} verts)"


class Compound:
    """Rigid union of convex parts sharing one body frame."""

    kind = "compound"

    __slots__ = ("parts",)

    def __init__(self, parts):
        if not parts:
            raise ShapeError("compound needs at least one part")
        self.parts = tuple(parts)

    @property
    def area(self) -> float:
        return sum(p.area for p in self.parts)

    def inertia(self, mass: float) -> float:
        total_area = self.area
        return sum(p.inertia(mass * p.area / total_area) for p in self.parts)

    def bounding_radius(self) -> float:
        return max(p.bounding_radius() for p in self.parts)


def box(width: float, height: float, center=(0.0, 0.0)) -> ConvexPolygon:
    cx, cy = center
    hw, hh = width / 2.0, height / 2.0
    return ConvexPolygon(
        [
            (cx - hw, cy - hh),
            (cx + hw, cy - hh),
            (cx + hw, cy + hh),
            (cx - hw, cy + hh),
        ]
    )


def regular_polygon(n: int, radius: float) -> ConvexPolygon:
    angles = np.linspace(0, 2 * math.pi, n, endpoint=False)
    return ConvexPolygon(np.stack([radius * np.cos(angles), radius * np.sin(angles)], axis=1))


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew monotone chain; returns CCW hull vertices."""
    pts = sorted(map(tuple, np.asarray(points, dtype=float)))
    if len(pts) < 3:
        raise ShapeError("need at least 3 points for a hull")

    def half(points_iter):
        out = []
        for p in points_iter:
            while len(out) >= 2 and (
                (out[-1][0] - out[-2][0]) * (p[1] - out[-2][1])
                - (out[-1][1] - out[-2][1]) * (p[0] - out[-2][0])
            ) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise ShapeError("degenerate (collinear) point set")
    return np.array(hull)


def transform_points(points: np.ndarray, pose) -> np.ndarray:
    """Body-frame points -> world frame for pose (x, y, theta)."""
    x, y, th = pose
    c, s = math.cos(th), math.sin(th)
    rot = np.array([[c, -s], [s, c]])
    return points @ rot.T + np.array([x, y])
