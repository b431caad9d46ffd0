"""Static occupancy grids and goal descriptors shared by envs and metrics."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class GoalDisc:
    center: tuple
    radius: float
    kind: str = "disc"

    def contains(self, point) -> bool:
        dx = point[0] - self.center[0]
        dy = point[1] - self.center[1]
        return dx * dx + dy * dy <= self.radius**2

    def cells(self, smap: "StaticMap") -> np.ndarray:
        rows, cols = np.nonzero(~smap.grid)
        xs, ys = smap.cell_centers(rows, cols)
        hit = (xs - self.center[0]) ** 2 + (ys - self.center[1]) ** 2 <= self.radius**2
        return np.stack([rows[hit], cols[hit]], axis=1)


@dataclass
class GoalLine:
    y_value: float
    kind: str = "line"

    def contains(self, point) -> bool:
        return point[1] >= self.y_value

    def cells(self, smap: "StaticMap") -> np.ndarray:
        rows, cols = np.nonzero(~smap.grid)
        _, ys = smap.cell_centers(rows, cols)
        hit = ys >= self.y_value
        return np.stack([rows[hit], cols[hit]], axis=1)


@dataclass
class GoalRect:
    """Axis-aligned rectangle goal.

    mode "interior": goal set is the rectangle interior (delivery receptacle).
    mode "boundary": goal set is the band just outside the rectangle's open
    sides (area clearing: boxes must leave through the open boundary).
    """

    lo: tuple
    hi: tuple
    mode: str = "interior"
    open_sides: tuple = ("left", "right", "top", "bottom")
    kind: str = "rect"

    def contains(self, point) -> bool:
        inside = self.lo[0] <= point[0] <= self.hi[0] and self.lo[1] <= point[1] <= self.hi[1]
        return inside if self.mode == "interior" else not inside

    def cells(self, smap: "StaticMap") -> np.ndarray:
        rows, cols = np.nonzero(~smap.grid)
        xs, ys = smap.cell_centers(rows, cols)
        if self.mode == "interior":
            hit = (xs >= self.lo[0]) & (xs <= self.hi[0]) & (ys >= self.lo[1]) & (ys <= self.hi[1])
        else:
            band = 2.0 * smap.resolution
            inside = (xs >= self.lo[0]) & (xs <= self.hi[0]) & (ys >= self.lo[1]) & (ys <= self.hi[1])
            hit = np.zeros_like(inside)
            if "left" in self.open_sides:
                hit |= (xs < self.lo[0]) & (xs >= self.lo[0] - band) & (ys >= self.lo[1]) & (ys <= self.hi[1])
            if "right" in self.open_sides:
                hit |= (xs > self.hi[0]) & (xs <= self.hi[0] + band) & (ys >= self.lo[1]) & (ys <= self.hi[1])
            if "bottom" in self.open_sides:
                hit |= (ys < self.lo[1]) & (ys >= self.lo[1] - band) & (xs >= self.lo[0]) & (xs <= self.hi[0])
            if "top" in self.open_sides:
                hit |= (ys > self.hi[1]) & (ys <= self.hi[1] + band) & (xs >= self.lo[0]) & (xs <= self.hi[0])
            hit &= ~inside
        return np.stack([rows[hit], cols[hit]], axis=1)


@dataclass
class StaticMap:
    """Occupancy of static obstacles only. grid[row, col]; row indexes +y."""

    grid: np.ndarray
    resolution: float
    origin: np.ndarray  # world coords of the grid's lower-left corner
    goal: object = None

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        self.origin = np.asarray(self.origin, dtype=float)

    @property
    def shape(self):
        return self.grid.shape

    def world_to_cell(self, point):
        col = int((point[0] - self.origin[0]) / self.resolution)
        row = int((point[1] - self.origin[1]) / self.resolution)
        return row, col

    def cell_centers(self, rows, cols):
        xs = self.origin[0] + (np.asarray(cols) + 0.5) * self.resolution
        ys = self.origin[1] + (np.asarray(rows) + 0.5) * self.resolution
        return xs, ys

    def in_bounds(self, row, col) -> bool:
        return 0 <= row < self.grid.shape[0] and 0 <= col < self.grid.shape[1]

    def is_free(self, point) -> bool:
        row, col = self.world_to_cell(point)
        return self.in_bounds(row, col) and not self.grid[row, col]

    def goal_cells(self) -> np.ndarray:
        if self.goal is None:
            raise ValueError("static map has no goal descriptor")
        return self.goal.cells(self)


def rasterize_polygons(shape, resolution, origin, polygons) -> np.ndarray:
    """Mark grid cells whose center lies inside any of the world polygons."""
    import cv2

    grid = np.zeros(shape, dtype=np.uint8)
    for poly in polygons:
        pts = (np.asarray(poly) - origin) / resolution - 0.5
        cv2.fillPoly(grid, [np.round(pts).astype(np.int32)], 1)
    return grid.astype(bool)
