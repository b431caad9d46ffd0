"""Acceptance gate: every criterion asserted at its stated tolerance.

Each test records one PASS/FAIL line (printed in the terminal summary) via
the `acceptance` fixture, then asserts.
"""
import asyncio
import contextlib
import itertools
import json
import math
import time
from multiprocessing import get_context

import numpy as np
import pytest

from pushnav.envs import StaticMap, make_env, spec_from_dict
from pushnav.envs.generation import generate_ice_field
from pushnav.harness import EpisodeLog, RunConfig, compute_metrics, replay, run_episode, run_suite
from pushnav.metrics import kruskal_mst_weight
from pushnav.observation import geodesic_distance_field
from pushnav.physics import Body, PhysicsParams, Role, World, box
from pushnav.policies import make_policy

ARENA = 6.0  # maze arena side length (m)


def _env(**kw):
    return make_env(spec_from_dict(kw))


# ---------------------------------------------------------------------------
# metric exactness


def test_scripted_clearing_two_of_three(acceptance):
    """Success score is exactly 2/3 after pushing 2 of 3 boxes out."""
    t0 = time.perf_counter()
    env = _env(
        env="area_clearing",
        boxes=3,
        max_steps=25,
        fixed_layout={
            "robot": (2.2, 2.5, 0.0),
            "boxes": [(2.7, 2.5, 0.0), (3.05, 2.5, 0.0), (2.0, 2.0, 0.0)],
        },
    )
    env.reset(0)
    while env.active:
        env.step(0.0)  # push due east: the two aligned boxes exit the zone
    m = compute_metrics(env)
    runtime = time.perf_counter() - t0
    acceptance(
        "scripted-clearing-success-score",
        m["S_manip"] == 2 / 3 and runtime < 10.0,
        f"S_manip={m['S_manip']!r} (want exactly {2/3!r}), runtime={runtime:.2f}s",
    )


def test_contact_free_maze_effort_is_one(acceptance):
    """Contact-free successful navigation scores effort exactly 1.0."""
    worst = None
    for seed in range(10):
        rng = np.random.default_rng(seed)
        start = (rng.uniform(0.6, 2.0), rng.uniform(0.6, 5.4), rng.uniform(-math.pi, math.pi))
        env = _env(env="maze", variant="open", obstacles=0, fixed_layout={"robot": start})
        log = run_episode(env, make_policy("dt_follower"), seed)
        m = log.footer["metrics"]
        contacts = sum(
            r["events"]["movable_contacts"] + r["events"]["static_contacts"] for r in log.steps
        )
        ok = log.footer["terminated"] and contacts == 0 and m["I_nav"] == 1.0
        if not ok:
            worst = (seed, m, contacts, log.footer["terminated"])
            break
    acceptance(
        "contact-free-nav-effort",
        worst is None,
        "I_nav=1.000000 on 10 contact-free successful corridor seeds"
        if worst is None
        else f"failed at {worst}",
    )


def _mst_bruteforce(n, edges):
    best = math.inf
    for combo in itertools.combinations(edges, n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        joined = 0
        for i, j, _ in combo:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
                joined += 1
        if joined == n - 1:
            best = min(best, sum(w for _, _, w in combo))
    return best


def test_mst_oracle(acceptance):
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(200):
        n = int(rng.integers(2, 7))
        edges = [
            (i, j, float(rng.uniform(0.1, 10.0)))
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.85
        ]
        oracle = _mst_bruteforce(n, edges)
        try:
            got = kruskal_mst_weight(n, edges)
        except ValueError:
            assert oracle == math.inf
            continue
        assert got == pytest.approx(oracle, abs=1e-12)
        checked += 1
    acceptance(
        "mst-oracle", checked > 100, f"Kruskal == exhaustive minimum on {checked} connected graphs"
    )


def _bellman_ford(grid, res, goal):
    h, w = grid.shape
    dist = np.full((h, w), math.inf)
    dist[goal] = 0.0
    moves = [
        (dr, dc, res * (math.sqrt(2) if dr and dc else 1.0))
        for dr in (-1, 0, 1)
        for dc in (-1, 0, 1)
        if (dr, dc) != (0, 0)
    ]
    changed = True
    while changed:
        changed = False
        for r in range(h):
            for c in range(w):
                if grid[r, c]:
                    continue
                for dr, dc, cost in moves:
                    rr, cc = r + dr, c + dc
                    if 0 <= rr < h and 0 <= cc < w and not grid[rr, cc]:
                        cand = dist[rr, cc] + cost
                        if cand < dist[r, c]:
                            dist[r, c] = cand
                            changed = True
    return dist


def test_dijkstra_oracle(acceptance):
    rng = np.random.default_rng(13)
    for trial in range(50):
        grid = rng.random((8, 8)) < 0.3
        free = np.argwhere(~grid)
        goal = tuple(free[rng.integers(len(free))])
        smap = StaticMap(grid=grid, resolution=0.5, origin=np.zeros(2))
        field = geodesic_distance_field(smap, np.array([goal]))
        oracle = _bellman_ford(grid, 0.5, goal)
        assert np.array_equal(field[~grid], oracle[~grid]), f"trial {trial}"
    acceptance("dijkstra-oracle", True, "grid Dijkstra == Bellman-Ford on 50 random 8x8 maps")


# ---------------------------------------------------------------------------
# navigation efficiency bound


def _enav_episode(seed):
    rng = np.random.default_rng(1000 + seed)
    while True:
        start = (rng.uniform(0.6, 5.4), rng.uniform(0.6, 5.4), rng.uniform(-math.pi, math.pi))
        goal = (rng.uniform(0.6, 5.4), rng.uniform(0.6, 5.4))
        if 1.5 <= math.dist(start[:2], goal) <= 4.5:
            break
    env = _env(
        env="maze", variant="open", obstacles=0, fixed_layout={"robot": start, "goal": goal}
    )
    log = run_episode(env, make_policy("dt_follower"), seed)
    return log.footer["terminated"], log.footer["metrics"]["E_nav"]


def test_e_nav_bound_random_episodes(acceptance):
    with get_context("fork").Pool(8) as pool:
        results = pool.map(_enav_episode, range(100))
    succ = [e for ok, e in results if ok]
    lo, hi = (min(succ), max(succ)) if succ else (0, 0)
    ok = len(succ) == 100 and all(0 < e <= 1.083 for e in succ)
    acceptance(
        "e-nav-octile-bound",
        ok,
        f"{len(succ)}/100 successful, E_nav range [{lo:.4f}, {hi:.4f}] within (0, 1.083]",
    )


def test_e_nav_straight_corridors(acceptance):
    runs = [
        ((0.6, 3.0, 0.0), (5.4, 3.0)),
        ((3.0, 0.6, math.pi / 2), (3.0, 5.4)),
        ((5.4, 3.0, math.pi), (0.6, 3.0)),
        ((3.0, 5.4, -math.pi / 2), (3.0, 0.6)),
    ]
    vals = []
    for start, goal in runs:
        env = _env(
            env="maze", variant="open", obstacles=0, fixed_layout={"robot": start, "goal": goal}
        )
        log = run_episode(env, make_policy("dt_follower"), 0)
        assert log.footer["terminated"]
        vals.append(log.footer["metrics"]["E_nav"])
    acceptance(
        "e-nav-straight-corridor",
        all(v >= 0.95 for v in vals),
        f"straight-corridor E_nav = {[round(v, 4) for v in vals]} all >= 0.95",
    )


# ---------------------------------------------------------------------------
# physics


def _make_world(**params):
    return World(PhysicsParams(**params))


def _add_box(world, body_id, pose, vel=(0, 0), size=0.25, role=Role.BOX):
    b = Body.make(body_id, box(size, size), role, np.array(pose, dtype=float))
    b.vel = np.array(vel, dtype=float)
    b.asleep = False
    return world.add(b)


def test_physics_friction_stop_time(acceptance):
    w = _make_world(mu=0.5)
    b = _add_box(w, 1, (0, 0, 0), vel=(1.0, 0.0))
    t_analytic = 1.0 / (0.5 * w.params.g)
    steps = 0
    while np.linalg.norm(b.vel) > 0 and steps < 1000:
        w.advance()
        steps += 1
    err = abs(steps * w.params.dt - t_analytic)
    acceptance(
        "physics-friction-stop-time",
        err <= w.params.dt + 1e-12,
        f"|stop_time - v0/(mu*g)| = {err:.5f}s <= dt = {w.params.dt:.5f}s",
    )


def test_physics_momentum_conservation(acceptance):
    w = _make_world(mu=0.0, contact_mu=0.0)
    a = _add_box(w, 1, (0, 0, 0), vel=(1.0, 0.0), role=Role.ROBOT)
    b = _add_box(w, 2, (0.251, 0, 0))
    p_before = a.mass * a.vel[0] + b.mass * b.vel[0]
    for _ in range(5):
        w.advance()
    err = abs(a.mass * a.vel[0] + b.mass * b.vel[0] - p_before)
    acceptance(
        "physics-momentum-conservation",
        err <= 1e-6,
        f"normal-momentum drift {err:.2e} <= 1e-6 (frictionless, restitution 0)",
    )


def test_physics_penetration_bound(acceptance):
    from pushnav.physics.collision import collide_shapes

    rng = np.random.default_rng(5)
    w = _make_world(mu=0.15)
    for i in range(4):  # walls of a 1.6 m pen to keep bodies interacting
        cx, cy, ww, hh = [
            (0.8, -0.1, 2.0, 0.2),
            (0.8, 1.7, 2.0, 0.2),
            (-0.1, 0.8, 0.2, 2.0),
            (1.7, 0.8, 0.2, 2.0),
        ][i]
        w.add(Body.make(100 + i, box(ww, hh), Role.WALL, np.array([cx, cy, 0.0])))
    for i in range(8):
        _add_box(w, i, (*rng.uniform(0.2, 1.4, 2), rng.uniform(-3, 3)), vel=rng.uniform(-1, 1, 2))
    worst = 0.0
    for step in range(10_000):
        if step % 200 == 0:  # keep the pile moving the whole time
            for b in w.bodies:
                if not b.static:
                    b.vel = rng.uniform(-1, 1, 2)
                    b.asleep = False
        w.advance()
        bodies = w.bodies
        for i, ba in enumerate(bodies):
            for bb in bodies[i + 1 :]:
                if ba.static and bb.static:
                    continue
                for cp in collide_shapes(ba.shape, ba.pose, bb.shape, bb.pose):
                    worst = max(worst, cp.penetration)
    acceptance(
        "physics-penetration-bound",
        worst <= 5.0e-4 + 1e-9,
        f"max post-solve penetration {worst * 1000:.4f} mm <= 0.5 mm over 10^4 steps",
    )


def test_physics_throughput(acceptance):
    rng = np.random.default_rng(0)
    w = _make_world()
    side = 10.0
    for i, (cx, cy, ww, hh) in enumerate(
        [
            (side / 2, -0.1, side, 0.2),
            (side / 2, side + 0.1, side, 0.2),
            (-0.1, side / 2, 0.2, side),
            (side + 0.1, side / 2, 0.2, side),
        ]
    ):
        w.add(Body.make(i, box(ww, hh), Role.WALL, np.array([cx, cy, 0.0])))
    for i in range(46):
        _add_box(w, 4 + i, (*rng.uniform(0.5, 9.5, 2), rng.uniform(-3, 3)), vel=rng.uniform(-1, 1, 2))
    w.advance()
    t0 = time.perf_counter()
    n = 5000
    for _ in range(n):
        w.advance()
    rate = n / (time.perf_counter() - t0)
    acceptance(
        "physics-throughput", rate >= 5000, f"{rate:,.0f} steps/s at 50 bodies (need >= 5,000)"
    )


# ---------------------------------------------------------------------------
# ice generation


def test_ice_concentration(acceptance):
    lo, hi = (0.2, 2.0), (5.8, 9.0)
    band_area = (hi[0] - lo[0]) * (hi[1] - lo[1])
    worst = 0.0
    for target in (0.1, 0.2, 0.3, 0.4, 0.5):
        for seed in range(20):
            floes = generate_ice_field(lo, hi, target, np.random.default_rng(seed))
            realized = sum(b.shape.area for b in floes) / band_area
            worst = max(worst, abs(realized - target))
    acceptance(
        "ice-concentration",
        worst <= 0.02,
        f"worst |realized - target| = {worst:.4f} <= 0.02 over {{0.1..0.5}} x 20 seeds",
    )


# ---------------------------------------------------------------------------
# determinism


def test_log_determinism_across_runs_and_parallelism(acceptance, tmp_path):
    spec = {"env": "maze", "variant": "U", "obstacles": 3, "max_steps": 300}
    dirs = []
    for name, par in (("run1", 1), ("run2", 1), ("par8", 8)):
        d = tmp_path / name
        run_suite(
            RunConfig(spec=spec, policy="dt_follower", episodes=8, out_dir=str(d), parallelism=par)
        )
        dirs.append(d)
    names = sorted(p.name for p in dirs[0].glob("episode_*.jsonl"))
    identical = all(
        (dirs[0] / n).read_bytes() == (dirs[1] / n).read_bytes() == (dirs[2] / n).read_bytes()
        for n in names
    )
    acceptance(
        "log-determinism",
        identical and len(names) == 8,
        "episode logs bit-identical across two runs and parallelism 1 vs 8",
    )


# ---------------------------------------------------------------------------
# baseline trends and competence


def test_rrt_effort_trend_with_obstacles(acceptance, tmp_path):
    means = []
    for n in (3, 6, 10):
        report = run_suite(
            RunConfig(
                spec={"env": "maze", "variant": "U", "obstacles": n},
                policy="rrt",
                episodes=20,
                out_dir=str(tmp_path / f"obs{n}"),
                parallelism=8,
            )
        )
        means.append(report.aggregate()["i_nav"][0])
    ok = means[0] >= means[1] >= means[2]
    acceptance(
        "rrt-effort-trend",
        ok,
        f"mean I_nav over obstacles 3/6/10 = {[round(m, 4) for m in means]} non-increasing",
    )


def test_rrt_maze_success_rate(acceptance, tmp_path):
    report = run_suite(
        RunConfig(
            spec={"env": "maze", "variant": "U", "obstacles": 3},
            policy="rrt",
            episodes=40,
            out_dir=str(tmp_path),
            parallelism=8,
        )
    )
    succ = sum(1 for e in report.episodes if e.e_nav and e.e_nav > 0)
    acceptance(
        "rrt-maze-success", succ >= 38, f"{succ}/40 U-maze goals reached (need >= 95%)"
    )


def test_greedy_push_delivery_success_rate(acceptance, tmp_path):
    report = run_suite(
        RunConfig(
            spec={"env": "box_delivery", "boxes": 1},
            policy="greedy_push",
            episodes=20,
            out_dir=str(tmp_path),
            parallelism=8,
        )
    )
    succ = sum(1 for e in report.episodes if e.s_manip == 1.0)
    acceptance(
        "greedy-push-delivery", succ >= 18, f"{succ}/20 single-box deliveries completed (need >= 90%)"
    )


# ---------------------------------------------------------------------------
# teleoperation loopback (scripted wire client; no browser needed)


def test_teleop_loopback_fidelity(acceptance, tmp_path):
    import websockets

    from pushnav.teleop import TeleopServer

    async def main():
        server = TeleopServer(
            {"env": "maze", "variant": "open"}, port=0, out_dir=tmp_path, rate=0.0, host="127.0.0.1"
        )
        ready = asyncio.Event()
        task = asyncio.create_task(server.run(ready))
        await asyncio.wait_for(ready.wait(), 5)
        try:
            async with websockets.connect(f"ws://127.0.0.1:{server.actual_port}") as ws:
                await ws.send(json.dumps({"type": "cmd", "cmd": {"keys": []}}))
                while True:
                    msg = json.loads(await asyncio.wait_for(ws.recv(), 60))
                    if msg["type"] == "episode_end":
                        return msg
        finally:
            task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await task

    end = asyncio.run(main())
    again = replay(end["log"])
    streamed = end["metrics"]
    recomputed = again.footer["metrics"]
    original = EpisodeLog.load(end["log"])
    ok = streamed == recomputed and again.footer == original.footer
    acceptance(
        "teleop-loopback",
        ok,
        f"streamed {streamed} == harness replay {recomputed}, footer bit-exact",
    )
