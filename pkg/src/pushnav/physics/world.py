"""Fixed-step deterministic world stepping: friction, impulses, projection."""
from __future__ import annotations

import math

import numpy as np

from .body import Body, PhysicsParams, Role, wrap_angle
from .collision import Contact, collide_shapes, shape_aabb

_SLEEP_LIN = 1e-4
_SLEEP_ANG = 1e-3


class SolverDivergence(RuntimeError):
    """A body exceeded the configured speed cap; bad configuration."""


class World:
    def __init__(self, params: PhysicsParams = None):
        self.params = params or PhysicsParams()
        self.bodies: list[Body] = []
        self._by_id: dict[int, Body] = {}
        self.tick = 0
        self._aabbs = None
        self._triu = None

    def add(self, body: Body) -> Body:
        if body.id in self._by_id:
            raise ValueError(f"duplicate body id {body.id}")
        self.bodies.append(body)
        self._by_id[body.id] = body
        self.bodies.sort(key=lambda b: b.id)
        self._aabbs = None
        return body

    def body(self, body_id: int) -> Body:
        return self._by_id[body_id]

    def remove(self, body_id: int):
        self.bodies = [b for b in self.bodies if b.id != body_id]
        del self._by_id[body_id]
        self._aabbs = None

    def total_kinetic_energy(self) -> float:
        return sum(b.kinetic_energy() for b in self.bodies)

    # ------------------------------------------------------------------

    def _apply_ground_friction(self, dt):
        p = self.params
        for b in self.bodies:
            if b.static or b.asleep or b.role is Role.ROBOT:
                continue
            mu_eff = p.mu * b.mu_scale
            if mu_eff > 0:
                speed = math.hypot(b.vel[0], b.vel[1])
                if speed > 0:
                    dv = min(mu_eff * p.g * dt, speed)
                    b.vel -= (dv / speed) * b.vel
                if b.omega != 0.0:
                    r_gyr = math.sqrt(b.inertia / b.mass)
                    dw = min(mu_eff * p.g * dt / r_gyr, abs(b.omega))
                    b.omega -= math.copysign(dw, b.omega)
            if p.drag_enabled:
                speed = math.hypot(b.vel[0], b.vel[1])
                if speed > 0:
                    dv = (p.c_lin * speed + p.c_quad * speed**2) / b.mass * dt
                    b.vel -= (min(dv, speed) / speed) * b.vel
                if b.omega != 0.0:
                    w = abs(b.omega)
                    dw = (p.c_ang_lin * w + p.c_ang_quad * w**2) / b.inertia * dt
                    b.omega -= math.copysign(min(dw, w), b.omega)
            if math.hypot(b.vel[0], b.vel[1]) < _SLEEP_LIN and abs(b.omega) < _SLEEP_ANG:
                b.vel[:] = 0.0
                b.omega = 0.0
                b.asleep = True

    def _integrate(self, dt):
        for b in self.bodies:
            if b.static or b.asleep:
                continue
            b.pose[0] += b.vel[0] * dt
            b.pose[1] += b.vel[1] * dt
            b.pose[2] = wrap_angle(b.pose[2] + b.omega * dt)
            b._aabb_dirty = True

    def _refresh_aabbs(self):
        bodies = self.bodies
        if self._aabbs is None or self._aabbs.shape[0] != len(bodies):
            self._aabbs = np.array([shape_aabb(b.shape, b.pose) for b in bodies])
            for b in bodies:
                b._aabb_dirty = False
        else:
            for i, b in enumerate(bodies):
                if b._aabb_dirty:
                    self._aabbs[i] = shape_aabb(b.shape, b.pose)
                    b._aabb_dirty = False

    def _candidate_pairs(self, include_sleeping=False):
        bodies = self.bodies
        n = len(bodies)
        if n < 2:
            return []
        self._refresh_aabbs()
        margin = 2.0 * self.params.slop
        a = self._aabbs
        lo0 = a[:, 0] - margin
        lo1 = a[:, 1] - margin
        hi0 = a[:, 2] + margin
        hi1 = a[:, 3] + margin
        overlap = (
            (lo0[:, None] <= hi0[None, :])
            & (lo0[None, :] <= hi0[:, None])
            & (lo1[:, None] <= hi1[None, :])
            & (lo1[None, :] <= hi1[:, None])
        )
        static = np.fromiter((b.static for b in bodies), bool, n)
        if not include_sleeping:
            awake = np.fromiter((not b.asleep for b in bodies), bool, n)
            overlap &= awake[:, None] | awake[None, :]
        overlap &= ~(static[:, None] & static[None, :])
        if self._triu is None or self._triu.shape[0] != n:
            self._triu = np.triu(np.ones((n, n), dtype=bool), 1)
        overlap &= self._triu
        idx = np.argwhere(overlap)
        return [(bodies[i], bodies[j]) for i, j in idx]

    def _narrowphase(self, pairs):
        contacts = []
        for ba, bb in pairs:
            for cp in collide_shapes(ba.shape, ba.pose, bb.shape, bb.pose):
                contacts.append(
                    Contact(ba.id, bb.id, cp.point, cp.normal, cp.penetration)
                )
        return contacts

    def _solve_velocity(self, contacts, dt):
        p = self.params
        arms = []
        for c in contacts:
            ba, bb = self._by_id[c.body_a], self._by_id[c.body_b]
            ba.wake()
            bb.wake()
            nx, ny = float(c.normal[0]), float(c.normal[1])
            rax = float(c.point[0]) - float(ba.pose[0])
            ray = float(c.point[1]) - float(ba.pose[1])
            rbx = float(c.point[0]) - float(bb.pose[0])
            rby = float(c.point[1]) - float(bb.pose[1])
            ra_n = rax * ny - ray * nx
            rb_n = rbx * ny - rby * nx
            k_n = ba.inv_mass + bb.inv_mass + ra_n**2 * ba.inv_inertia + rb_n**2 * bb.inv_inertia
            tx, ty = -ny, nx
            ra_t = rax * ty - ray * tx
            rb_t = rbx * ty - rby * tx
            k_t = ba.inv_mass + bb.inv_mass + ra_t**2 * ba.inv_inertia + rb_t**2 * bb.inv_inertia
            # restitution target from pre-solve approach speed
            rvx = (bb.vel[0] - bb.omega * rby) - (ba.vel[0] - ba.omega * ray)
            rvy = (bb.vel[1] + bb.omega * rbx) - (ba.vel[1] + ba.omega * rax)
            vn0 = rvx * nx + rvy * ny
            e = max(ba.restitution, bb.restitution)
            bounce = -e * vn0 if vn0 < -1e-3 else 0.0
            arms.append([ba, bb, nx, ny, rax, ray, rbx, rby, k_n, k_t, bounce, 0.0, 0.0])

        mu_c = p.contact_mu
        for _ in range(p.solver_iterations):
            for arm in arms:
                ba, bb, nx, ny, rax, ray, rbx, rby, k_n, k_t, bounce = arm[:11]
                rvx = (bb.vel[0] - bb.omega * rby) - (ba.vel[0] - ba.omega * ray)
                rvy = (bb.vel[1] + bb.omega * rbx) - (ba.vel[1] + ba.omega * rax)
                vn = rvx * nx + rvy * ny
                j_old = arm[11]
                j_new = j_old - (vn - bounce) / k_n
                if j_new < 0.0:
                    j_new = 0.0
                arm[11] = j_new
                dj = j_new - j_old
                px, py = dj * nx, dj * ny
                ba.vel[0] -= px * ba.inv_mass
                ba.vel[1] -= py * ba.inv_mass
                ba.omega -= (rax * py - ray * px) * ba.inv_inertia
                bb.vel[0] += px * bb.inv_mass
                bb.vel[1] += py * bb.inv_mass
                bb.omega += (rbx * py - rby * px) * bb.inv_inertia

                if mu_c > 0 and j_new > 0:
                    tx, ty = -ny, nx
                    rvx = (bb.vel[0] - bb.omega * rby) - (ba.vel[0] - ba.omega * ray)
                    rvy = (bb.vel[1] + bb.omega * rbx) - (ba.vel[1] + ba.omega * rax)
                    vt = rvx * tx + rvy * ty
                    max_f = mu_c * j_new
                    jt_old = arm[12]
                    jt_new = jt_old - vt / k_t
                    if jt_new > max_f:
                        jt_new = max_f
                    elif jt_new < -max_f:
                        jt_new = -max_f
                    arm[12] = jt_new
                    djt = jt_new - jt_old
                    px, py = djt * tx, djt * ty
                    ba.vel[0] -= px * ba.inv_mass
                    ba.vel[1] -= py * ba.inv_mass
                    ba.omega -= (rax * py - ray * px) * ba.inv_inertia
                    bb.vel[0] += px * bb.inv_mass
                    bb.vel[1] += py * bb.inv_mass
                    bb.omega += (rbx * py - rby * px) * bb.inv_inertia

    def _solve_position(self, pairs, contacts):
        # Any body displaced by a correction is woken, so a sleeping body can
        # never be moved unseen and sleeping-sleeping residuals stay within
        # the band they had when the bodies went to sleep. That lets the
        # first pass reuse the contacts already computed for the velocity
        # solve; later passes only re-collide pairs touching a moved body.
        # The pair set is refreshed once corrections have consumed the
        # broadphase margin, since a large correction can push a body into a
        # neighbor that was not a candidate initially.
        p = self.params
        margin = 2.0 * p.slop
        frac = min(1.0, 4.0 * p.baumgarte)
        eps = 0.05 * p.slop  # residual stays well inside penetration_tol
        budget = margin
        for _ in range(p.position_iterations):
            max_disp = 0.0
            moved = set()
            woke = False
            for c in contacts:
                depth = c.penetration - p.slop
                if depth <= 0:
                    continue
                ba, bb = self._by_id[c.body_a], self._by_id[c.body_b]
                inv_sum = ba.inv_mass + bb.inv_mass
                if inv_sum == 0:
                    continue
                # resolve a fixed fraction of the residual depth per pass
                corr = frac * depth / inv_sum
                ba.pose[:2] -= c.normal * corr * ba.inv_mass
                bb.pose[:2] += c.normal * corr * bb.inv_mass
                # a displaced body must rejoin collision checks next step
                if ba.inv_mass > 0.0:
                    ba._aabb_dirty = True
                    woke = woke or ba.asleep
                    ba.asleep = False
                    moved.add(ba.id)
                if bb.inv_mass > 0.0:
                    bb._aabb_dirty = True
                    woke = woke or bb.asleep
                    bb.asleep = False
                    moved.add(bb.id)
                max_disp = max(max_disp, corr * max(ba.inv_mass, bb.inv_mass))
            if max_disp <= eps:  # every contact essentially within the slop band
                break
            budget -= max_disp
            # a newly woken body may overlap sleeping neighbors whose pairs
            # the awake-filtered candidate set left out
            if budget <= 0.0 or woke:
                pairs = self._candidate_pairs()
                budget = margin
            contacts = self._narrowphase(
                [(ba, bb) for ba, bb in pairs if ba.id in moved or bb.id in moved]
            )

    def _check_cap(self):
        cap2 = self.params.speed_cap**2
        for b in self.bodies:
            if b.asleep:
                continue
            if b.vel[0] * b.vel[0] + b.vel[1] * b.vel[1] > cap2:
                raise SolverDivergence(
                    f"body {b.id} speed {math.hypot(b.vel[0], b.vel[1]):.1f} "
                    f"exceeds cap {self.params.speed_cap}"
                )

    def advance(self, dt: float = None) -> list[Contact]:
        """One fixed step; returns the contacts resolved this step."""
        p = self.params
        if dt is not None and abs(dt - p.dt) > 1e-12:
            raise ValueError("advance must be called with the configured dt")
        dt = p.dt
        self._apply_ground_friction(dt)
        self._integrate(dt)
        pairs = self._candidate_pairs()
        contacts = self._narrowphase(pairs)
        if contacts:
            # the velocity solve wakes bodies it touches; pairs collected
            # while those bodies slept miss their other neighbors
            asleep0 = [b.asleep for b in self.bodies]
            self._solve_velocity(contacts, dt)
            if any(was and not b.asleep for was, b in zip(asleep0, self.bodies)):
                pairs = self._candidate_pairs()
                contacts = self._narrowphase(pairs)
            self._solve_position(pairs, contacts)
        self._check_cap()
        self.tick += 1
        return contacts
