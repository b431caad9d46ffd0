"""Rigid body and simulation parameter types."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .shapes import Compound, ConvexPolygon, Disc


class Role(enum.Enum):
    ROBOT = "robot"
    BOX = "box"
    WHEELED_BOX = "wheeled_box"
    ICE_FLOE = "ice_floe"
    WALL = "wall"


@dataclass
class PhysicsParams:
    dt: float = 1.0 / 60.0
    solver_iterations: int = 10
    mu: float = 0.5                  # ground kinetic friction coefficient
    g: float = 9.81
    baumgarte: float = 0.2           # positional correction factor per pass
    slop: float = 2.0e-4             # allowed residual penetration (m)
    penetration_tol: float = 4.5e-4  # position solver exit threshold (m)
    position_iterations: int = 32
    contact_mu: float = 0.3          # body-body tangential friction
    drag_enabled: bool = False
    c_lin: float = 0.0               # N*s/m
    c_quad: float = 0.0              # N*s^2/m^2
    c_ang_lin: float = 0.0
    c_ang_quad: float = 0.0
    wheeled_mu_scale: float = 0.1
    speed_cap: float = 50.0

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.mu < 0:
            raise ValueError("mu must be non-negative")
        if self.solver_iterations < 1:
            raise ValueError("need at least one solver iteration")


def wrap_angle(theta: float) -> float:
    """Wrap to (-pi, pi]."""
    t = math.fmod(theta, 2.0 * math.pi)
    if t <= -math.pi:
        t += 2.0 * math.pi
    elif t > math.pi:
        t -= 2.0 * math.pi
    return t


_DENSITY = {Role.BOX: 16.0, Role.WHEELED_BOX: 16.0, Role.ICE_FLOE: 8.0}


@dataclass
class Body:
    id: int
    shape: object
    role: Role
    pose: np.ndarray            # (x, y, theta)
    vel: np.ndarray = None      # (vx, vy)
    omega: float = 0.0
    mass: float = 1.0           # 0 for static walls
    inertia: float = 1.0
    restitution: float = 0.0
    mu_scale: float = 1.0       # multiplies ground mu (wheeled boxes < 1)
    static: bool = False
    asleep: bool = False
    _aabb_dirty: bool = True

    def __post_init__(self):
        self.pose = np.asarray(self.pose, dtype=float)
        self.vel = np.zeros(2) if self.vel is None else np.asarray(self.vel, dtype=float)
        self.pose[2] = wrap_angle(self.pose[2])
        if self.static:
            self.mass = 0.0
            self.inv_mass = 0.0
            self.inv_inertia = 0.0
            self.asleep = True
        else:
            if self.mass <= 0:
                raise ValueError("dynamic bodies need positive mass")
            self.inv_mass = 1.0 / self.mass
            self.inv_inertia = 1.0 / self.inertia

    @classmethod
    def make(cls, body_id, shape, role, pose, mass=None, **kw):
        if role is Role.WALL:
            return cls(body_id, shape, role, pose, mass=0.0, static=True, **kw)
        if mass is None:
            mass = _DENSITY.get(role, 10.0) * shape.area
        mu_scale = kw.pop("mu_scale", 0.1 if role is Role.WHEELED_BOX else 1.0)
        return cls(
            body_id,
            shape,
            role,
            pose,
            mass=mass,
            inertia=shape.inertia(mass),
            mu_scale=mu_scale,
            **kw,
        )

    @property
    def position(self) -> np.ndarray:
        return self.pose[:2]

    @property
    def theta(self) -> float:
        return float(self.pose[2])

    def kinetic_energy(self) -> float:
        if self.static:
            return 0.0
        return 0.5 * self.mass * float(self.vel @ self.vel) + 0.5 * self.inertia * self.omega**2

    def wake(self):
        if not self.static:
            self.asleep = False
