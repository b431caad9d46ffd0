"""Episode lifecycle shared by all environments: reset/step, actions, traces."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..metrics import JITTER_THRESHOLD, EpisodeTrace, ObjectTrace
from ..observation import ObsConfig, geodesic_distance_field, render_observation
from ..physics import (
    Body,
    PhysicsParams,
    Role,
    World,
    box,
    robot_shape,
    wheels_to_twist,
    wrap_angle,
)
from .config import EnvSpec, InvalidSpec
from .static_map import StaticMap, rasterize_polygons

MOVABLE_ROLES = (Role.BOX, Role.WHEELED_BOX, Role.ICE_FLOE)


class EpisodeStateError(RuntimeError):
    pass


class WrongActionMode(ValueError):
    pass


@dataclass
class Transition:
    observation: object
    reward: float
    terminated: bool
    truncated: bool
    info: dict


@dataclass
class EpisodeOutcome:
    success: bool
    object_success: dict
    k: int
    k_completed: int


def sample_field(field: np.ndarray, smap: StaticMap, point) -> float:
    """Bilinear sample of a distance field; falls back to the nearest finite
    corner near obstacles."""
    gx = (point[0] - smap.origin[0]) / smap.resolution - 0.5
    gy = (point[1] - smap.origin[1]) / smap.resolution - 0.5
    h, w = field.shape
    c0 = min(max(int(math.floor(gx)), 0), w - 2)
    r0 = min(max(int(math.floor(gy)), 0), h - 2)
    fx = min(max(gx - c0, 0.0), 1.0)
    fy = min(max(gy - r0, 0.0), 1.0)
    q = field[r0 : r0 + 2, c0 : c0 + 2]
    if np.isfinite(q).all():
        return float(
            q[0, 0] * (1 - fx) * (1 - fy)
            + q[0, 1] * fx * (1 - fy)
            + q[1, 0] * (1 - fx) * fy
            + q[1, 1] * fx * fy
        )
    finite = q[np.isfinite(q)]
    return float(finite.min()) if finite.size else math.inf


class Environment:
    """Base class; subclasses build the world and define reward/termination."""

    kind: str = None

    def __init__(self, spec: EnvSpec):
        if spec.env != self.kind:
            raise InvalidSpec(f"spec.env {spec.env!r} does not match {self.kind!r}")
        self.spec = spec
        self.world: World = None
        self.static_map: StaticMap = None
        self.goal_field: np.ndarray = None
        self._active = False
        self._steps = 0

    # ---------------------------------------------------------- subclass API

    def _build(self, rng) -> None:
        """Populate self.world, self.static_map (with goal), and bodies."""
        raise NotImplementedError

    def _reward(self, events: dict, terminated: bool) -> float:
        raise NotImplementedError

    def _check_terminated(self) -> bool:
        raise NotImplementedError

    def _object_completed(self, body: Body) -> bool:
        return False

    # -------------------------------------------------------------- plumbing

    @property
    def robot(self) -> Body:
        return self._robot

    def movables(self):
        return [b for b in self.world.bodies if b.role in MOVABLE_ROLES]

    def _physics_params(self) -> PhysicsParams:
        return PhysicsParams(drag_enabled=self.spec.drag)

    def _make_walls(self, lo, hi, thickness=0.2, next_id=1, sides=("left", "right", "top", "bottom")):
        """Perimeter wall bodies; returns (bodies, next_id)."""
        t = thickness
        cx, cy = (lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2
        w, h = hi[0] - lo[0], hi[1] - lo[1]
        defs = {
            "left": ((lo[0] - t / 2, cy), (t, h + 2 * t)),
            "right": ((hi[0] + t / 2, cy), (t, h + 2 * t)),
            "bottom": ((cx, lo[1] - t / 2), (w + 2 * t, t)),
            "top": ((cx, hi[1] + t / 2), (w + 2 * t, t)),
        }
        bodies = []
        for side in sides:
            (x, y), (bw, bh) = defs[side]
            bodies.append(Body.make(next_id, box(bw, bh), Role.WALL, np.array([x, y, 0.0])))
            next_id += 1
        return bodies, next_id

    def _wall_polygons(self):
        from ..physics.shapes import transform_points

        polys = []
        for b in self.world.bodies:
            if b.role is Role.WALL:
                polys.append(transform_points(b.shape.vertices, b.pose))
        return polys

    def _finish_build(self, map_lo, map_hi, goal):
        """Rasterize static bodies and precompute the goal distance field."""
        res = self.spec.map_resolution
        shape = (
            int(round((map_hi[1] - map_lo[1]) / res)),
            int(round((map_hi[0] - map_lo[0]) / res)),
        )
        grid = rasterize_polygons(shape, res, np.asarray(map_lo, float), self._wall_polygons())
        self.static_map = StaticMap(grid=grid, resolution=res, origin=np.asarray(map_lo, float), goal=goal)
        self.goal_field = geodesic_distance_field(self.static_map, self.static_map.goal_cells())

    def _make_robot(self, pose, next_id) -> int:
        from ..physics.bumpers import ROBOT_MASS

        shape = robot_shape(self.spec.bumper)
        self._robot = Body.make(next_id, shape, Role.ROBOT, np.asarray(pose, float), mass=ROBOT_MASS)
        self._robot.asleep = False
        self.world.add(self._robot)
        return next_id + 1

    # ----------------------------------------------------------------- reset

    def reset(self, seed: int = None):
        seed = self.spec.seed if seed is None else seed
        rng = np.random.default_rng(seed)
        self.world = World(self._physics_params())
        self._robot = None
        self._build(rng)
        assert self._robot is not None, "_build must create the robot"

        self._steps = 0
        self._active = True
        self._succeeded = False
        self._l0 = 0.0
        self._robot_start = tuple(self._robot.position)
        self._obj_len = {b.id: 0.0 for b in self.movables()}
        self._obj_init = {b.id: tuple(b.position) for b in self.movables()}
        self._obj_mass = {b.id: b.mass for b in self.movables()}
        self._contact_pairs = set()
        self._completed_ever = set()
        self._robot_goal_dist = sample_field(self.goal_field, self.static_map, self._robot.position)
        self._obj_goal_dist = {
            b.id: sample_field(self.goal_field, self.static_map, b.position) for b in self.movables()
        }
        return self._observe()

    # ------------------------------------------------------------------ step

    def _command(self, v_fwd, omega):
        r = self._robot
        th = r.theta
        r.vel = np.array([v_fwd * math.cos(th), v_fwd * math.sin(th)])
        r.omega = omega
        r.asleep = False

    def _substep(self, v_fwd, omega, events):
        self._command(v_fwd, omega)
        prev_robot = self._robot.position.copy()
        prev_obj = {b.id: b.position.copy() for b in self.movables()}
        if self.kind == "ship_ice":
            ke_before = {b.id: b.kinetic_energy() for b in self.movables()}
        contacts = self.world.advance()

        self._l0 += float(np.linalg.norm(self._robot.position - prev_robot))
        for b in self.movables():
            d = float(np.linalg.norm(b.position - prev_obj[b.id]))
            if d >= JITTER_THRESHOLD:
                self._obj_len[b.id] += d

        robot_id = self._robot.id
        roles = {b.id: b.role for b in self.world.bodies}
        pairs = set()
        for c in contacts:
            pairs.add((c.body_a, c.body_b))
            key = (c.body_a, c.body_b)
            if key in self._contact_pairs:
                continue
            a_role, b_role = roles[c.body_a], roles[c.body_b]
            involved_robot = robot_id in key
            if involved_robot and (a_role in MOVABLE_ROLES or b_role in MOVABLE_ROLES):
                events["new_movable_contacts"] += 1
            if involved_robot and (a_role is Role.WALL or b_role is Role.WALL):
                events["new_static_contacts"] += 1
        if self.kind == "ship_ice":
            touched = {i for p in pairs if robot_id in p for i in p if i != robot_id}
            for b in self.movables():
                if b.id in touched:
                    gain = b.kinetic_energy() - ke_before[b.id]
                    if gain > 0:
                        events["floe_ke_gain"] += gain
        self._contact_pairs = pairs

    def step(self, action) -> Transition:
        if not self._active:
            raise EpisodeStateError("step() called on an inactive episode; reset first")
        spec = self.spec
        events = {"new_movable_contacts": 0, "new_static_contacts": 0, "floe_ke_gain": 0.0}

        if spec.action_mode == "angular":
            try:
                omega = float(action)
            except (TypeError, ValueError):
                raise WrongActionMode("angular mode expects a scalar angular velocity")
            omega = min(max(omega, -spec.omega_max), spec.omega_max)
            self._substep(spec.v0, omega, events)
        elif spec.action_mode == "wheels":
            try:
                v_l, v_r = action
            except (TypeError, ValueError):
                raise WrongActionMode("wheels mode expects a (v_left, v_right) pair")
            v, omega = wheels_to_twist(float(v_l), float(v_r))
            self._substep(v, omega, events)
        elif spec.action_mode == "heading":
            try:
                phi = wrap_angle(float(action))
            except (TypeError, ValueError):
                raise WrongActionMode("heading mode expects a scalar heading angle")
            self._robot.pose[2] = phi  # kinematic turn-in-place
            self._robot._aabb_dirty = True
            n_sub = max(1, round(spec.heading_step / (spec.v0 * self.world.params.dt)))
            for _ in range(n_sub):
                self._robot.pose[2] = phi
                self._substep(spec.v0, 0.0, events)
        else:
            raise WrongActionMode(f"unknown action mode {spec.action_mode!r}")

        # goal-distance telescoping terms
        new_robot_d = sample_field(self.goal_field, self.static_map, self._robot.position)
        events["robot_goal_decrement"] = self._robot_goal_dist - new_robot_d
        self._robot_goal_dist = new_robot_d
        dec = 0.0
        for b in self.movables():
            nd = sample_field(self.goal_field, self.static_map, b.position)
            dec += self._obj_goal_dist[b.id] - nd
            self._obj_goal_dist[b.id] = nd
        events["object_goal_decrement"] = dec

        newly_done = []
        for b in self.movables():
            if b.id not in self._completed_ever and self._object_completed(b):
                self._completed_ever.add(b.id)
                newly_done.append(b.id)
        events["completions"] = newly_done

        self._steps += 1
        terminated = self._check_terminated()
        truncated = (not terminated) and self._steps >= spec.max_steps
        reward = self._reward(events, terminated)
        if terminated:
            self._succeeded = True
            self._active = False
        elif truncated:
            self._active = False

        info = {
            "events": events,
            "steps": self._steps,
            "completions": newly_done,
            "robot_pose": self._robot.pose.copy(),
        }
        return Transition(self._observe(), reward, terminated, truncated, info)

    def _observe(self):
        return render_observation(self.world, self.static_map, self.goal_field, self.spec.obs, self.kind)

    # --------------------------------------------------------------- results

    @property
    def steps(self) -> int:
        return self._steps

    @property
    def active(self) -> bool:
        return self._active

    def outcome(self) -> EpisodeOutcome:
        obj = {b.id: self._object_completed(b) for b in self.movables()}
        return EpisodeOutcome(
            success=self._succeeded,
            object_success=obj,
            k=len(obj),
            k_completed=sum(obj.values()),
        )

    def trace(self) -> EpisodeTrace:
        objs = [
            ObjectTrace(
                id=b.id,
                mass=self._obj_mass[b.id],
                path_length=self._obj_len[b.id],
                initial_position=self._obj_init[b.id],
                success=self._object_completed(b),
            )
            for b in self.movables()
        ]
        return EpisodeTrace(
            robot_mass=self._robot.mass,
            robot_path_length=self._l0,
            objects=objs,
            success=self._succeeded,
            robot_start=self._robot_start,
            static_map=self.static_map,
        )
