"""Live teleoperation service.

Hosts one environment over a websocket so a human (or scripted client) can
drive the robot. Wire protocol: UTF-8 JSON text frames, discriminated by
``type``:

* ``state``  (server → client): ``tick``, ``pose`` (robot x/y/theta),
  ``bodies`` (list of ``{id, kind, vertices}`` with world-frame vertex
  rings), ``metrics`` (live score estimates and reward-to-date), plus
  rendering extras ``env``/``variant``/``mode``/``bounds``/``goal``.
* ``cmd``    (client → server): ``cmd`` holds either ``{"keys": [...]}``
  (of ``up/down/left/right``) or an analog field matching the action mode
  (``omega``, ``heading``, or ``wheels``). Last write wins; the latest
  command is applied on every physics step.
* ``reset``  (client → server): ``spec`` (env spec overrides) + ``seed``;
  aborts the current episode and starts a fresh one.
* ``episode_end`` (server → client): final metrics, seed, and log path.

Simulation advances at real time (60 Hz physics, state broadcast at 20 Hz)
while a client is connected; with no client the world holds and the tick
freezes. A second concurrent connection is rejected with a ``busy`` notice.
Every episode is written as a standard JSONL episode log, so teleoperated
runs replay through the batch harness exactly like autonomous ones.
"""
from __future__ import annotations

import asyncio
import dataclasses
import itertools
import json
import math
from pathlib import Path

import numpy as np
import websockets

from ..envs import make_env, spec_from_dict
from ..envs.base import sample_field
from ..harness import NAV_ENVS, EpisodeRecorder
from ..physics.shapes import Compound, Disc, transform_points
from ..policies.teleop import TeleopPolicy

DEFAULT_PORT = 8765
STATE_EVERY = 3  # physics steps per state broadcast (60 Hz -> 20 Hz)


def body_vertices(body):
    """World-frame vertex rings of a body (one ring per shape part)."""
    shape = body.shape
    parts = shape.parts if isinstance(shape, Compound) else [shape]
    rings = []
    for p in parts:
        if isinstance(p, Disc):
            ang = np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False)
            local = np.stack(
                [p.center[0] + p.radius * np.cos(ang), p.center[1] + p.radius * np.sin(ang)],
                axis=1,
            )
        else:
            local = p.vertices
        rings.append(np.round(transform_points(local, body.pose), 4).tolist())
    return rings


class TeleopServer:
    def __init__(
        self,
        spec: dict,
        port: int = DEFAULT_PORT,
        out_dir="teleop_logs",
        rate: float = 1.0,
        host: str = "0.0.0.0",
    ):
        self._base_spec = dict(spec)
        self.port = port
        self.host = host
        self.out_dir = Path(out_dir)
        self.rate = rate  # real-time multiplier; 0 disables pacing (tests)
        self.actual_port = None

        self._client = None
        self._cmd = {}
        self._reset_request = None
        self._episode_counter = itertools.count()

        self._env = None
        self._policy = TeleopPolicy()
        self._recorder = None
        self._seed = None
        self._reward_total = 0.0
        self._l0_star = None
        self._li_star = {}
        self._step_i = 0

    # ------------------------------------------------------------- episodes

    def _start_episode(self, overrides: dict, seed):
        spec_dict = dict(self._base_spec)
        spec_dict.update(overrides or {})
        spec = spec_from_dict(spec_dict)
        seed = spec.seed if seed is None else int(seed)
        self._env = make_env(spec)
        self._env.reset(seed)
        self._policy.reset(self._env, seed)
        self._recorder = EpisodeRecorder(self._env, "teleop", seed)
        self._seed = seed
        self._reward_total = 0.0
        self._step_i = 0
        env = self._env
        if env.kind in NAV_ENVS:
            self._l0_star = sample_field(env.goal_field, env.static_map, env.robot.position)
            self._li_star = {}
        else:
            self._l0_star = None
            self._li_star = {
                b.id: sample_field(env.goal_field, env.static_map, b.position)
                for b in env.movables()
            }

    def _write_log(self, terminated, truncated, failed=False, error=None):
        log = self._recorder.finish(self._env, terminated, truncated, failed, error)
        path = self.out_dir / f"teleop_{next(self._episode_counter):04d}_seed{self._seed}.jsonl"
        log.write(path)
        return log, path

    # -------------------------------------------------------------- actions

    def _action(self):
        env = self._env
        mode = env.spec.action_mode
        cmd = self._cmd or {}
        if mode == "angular" and "omega" in cmd:
            w = float(cmd["omega"])
            return max(-env.spec.omega_max, min(env.spec.omega_max, w))
        if mode == "heading" and "heading" in cmd:
            return float(cmd["heading"])
        if mode == "wheels" and "wheels" in cmd:
            v_l, v_r = cmd["wheels"]
            return (float(v_l), float(v_r))
        self._policy.set_keys(cmd.get("keys", []))
        return self._policy.act(None, env)

    # -------------------------------------------------------------- metrics

    def _live_metrics(self):
        env = self._env
        trace = env.trace()
        l0 = trace.robot_path_length
        sum_ml = trace.robot_mass * l0 + sum(o.mass * o.path_length for o in trace.objects)
        out = {"l0": l0, "sum_ml": sum_ml, "reward": self._reward_total}
        if env.kind in NAV_ENVS:
            out["E_nav_projected"] = self._l0_star / l0 if l0 > 0 else 1.0
            out["I_nav"] = (trace.robot_mass * l0) / sum_ml if sum_ml > 0 else 1.0
        else:
            k = trace.k or 1
            out["S_manip"] = trace.k_completed / k
            numer = trace.robot_mass * l0
            for o in trace.objects:
                if o.success:
                    numer += o.mass * self._li_star[o.id]
            out["I_manip"] = numer / sum_ml if sum_ml > 0 else 1.0
        return out

    def _state_message(self):
        env = self._env
        bodies = [
            {"id": b.id, "kind": b.role.value, "vertices": body_vertices(b)}
            for b in env.world.bodies
        ]
        smap = env.static_map
        lo = smap.origin
        hi = lo + np.array([smap.grid.shape[1], smap.grid.shape[0]]) * smap.resolution
        return {
            "type": "state",
            "tick": env.world.tick,
            "pose": np.round(self._env.robot.pose, 6).tolist(),
            "bodies": bodies,
            "metrics": self._live_metrics(),
            # extras for rendering clients; scripted consumers may ignore them
            "env": env.kind,
            "variant": env.spec.variant,
            "mode": env.spec.action_mode,
            "bounds": [lo.tolist(), hi.tolist()],
            "goal": dataclasses.asdict(smap.goal),
        }

    # ------------------------------------------------------------- sim loop

    async def _send(self, message: dict):
        client = self._client
        if client is None:
            return
        try:
            await client.send(json.dumps(message))
        except websockets.exceptions.ConnectionClosed:
            pass

    async def _sim_loop(self):
        self._start_episode({}, None)
        dt = self._env.world.params.dt
        while True:
            if self._reset_request is not None:
                overrides, seed = self._reset_request
                self._reset_request = None
                if self._env.active and self._step_i > 0:
                    self._write_log(False, False, failed=True, error="aborted by reset")
                self._start_episode(overrides, seed)
                dt = self._env.world.params.dt
                await self._send(self._state_message())
                continue
            if self._client is None or not self._env.active:
                await asyncio.sleep(0.01 if self.rate else 0)
                continue

            env = self._env
            tick_before = env.world.tick
            action = self._action()
            tr = env.step(action)
            self._recorder.record(env, action, tr)
            self._reward_total += float(tr.reward)
            self._step_i += 1

            if self._step_i % STATE_EVERY == 0 or not env.active:
                await self._send(self._state_message())
            if not env.active:
                log, path = self._write_log(tr.terminated, tr.truncated)
                await self._send(
                    {
                        "type": "episode_end",
                        "seed": self._seed,
                        "metrics": log.footer["metrics"],
                        "outcome": log.footer["outcome"],
                        "log": str(path),
                    }
                )
            elapsed = (env.world.tick - tick_before) * dt
            await asyncio.sleep(elapsed / self.rate if self.rate else 0)

    # ----------------------------------------------------------- connection

    async def _handler(self, ws):
        if self._client is not None:
            await ws.send(json.dumps({"type": "busy", "detail": "another operator is connected"}))
            await ws.close()
            return
        self._client = ws
        self._cmd = {}
        try:
            if self._env is not None:
                await ws.send(json.dumps(self._state_message()))
            async for raw in ws:
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    continue
                kind = msg.get("type")
                if kind == "cmd":
                    self._cmd = msg.get("cmd") or {}
                elif kind == "reset":
                    self._reset_request = (msg.get("spec") or {}, msg.get("seed"))
        finally:
            # pause on disconnect: latest command cleared, loop stops stepping
            self._client = None
            self._cmd = {}

    async def run(self, ready: asyncio.Event = None):
        sim = asyncio.create_task(self._sim_loop())
        try:
            async with websockets.serve(self._handler, self.host, self.port) as server:
                self.actual_port = server.sockets[0].getsockname()[1]
                if ready is not None:
                    ready.set()
                await asyncio.Future()  # run until cancelled
        finally:
            sim.cancel()


def serve(spec: dict, port: int = DEFAULT_PORT, out_dir="teleop_logs", rate: float = 1.0):
    """Run the teleoperation service until interrupted."""
    server = TeleopServer(spec, port=port, out_dir=out_dir, rate=rate)
    asyncio.run(server.run())
