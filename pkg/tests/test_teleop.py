"""Teleoperation service: wire protocol, pause/busy semantics, loopback."""
import asyncio
import contextlib
import json
from pathlib import Path

import pytest
import websockets

from pushnav.harness import EpisodeLog, replay
from pushnav.teleop import TeleopServer


def run_with_server(spec, scenario, tmp_path, rate=0.0):
    """Start an unpaced server on an ephemeral port and run the scenario."""

    async def main():
        server = TeleopServer(spec, port=0, out_dir=tmp_path, rate=rate, host="127.0.0.1")
        ready = asyncio.Event()
        task = asyncio.create_task(server.run(ready))
        await asyncio.wait_for(ready.wait(), 5)
        url = f"ws://127.0.0.1:{server.actual_port}"
        try:
            return await asyncio.wait_for(scenario(url, server), 60)
        finally:
            task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await task

    return asyncio.run(main())


async def _recv_json(ws):
    return json.loads(await ws.recv())


async def _recv_type(ws, kind):
    while True:
        msg = await _recv_json(ws)
        if msg["type"] == kind:
            return msg


def test_state_stream_schema(tmp_path):
    async def scenario(url, server):
        async with websockets.connect(url) as ws:
            await ws.send(json.dumps({"type": "cmd", "cmd": {"keys": []}}))
            states = []
            while len(states) < 5:
                raw = await ws.recv()
                assert len(raw.encode()) < 64 * 1024
                msg = json.loads(raw)
                if msg["type"] == "state":
                    states.append(msg)
        ticks = [s["tick"] for s in states]
        assert ticks == sorted(set(ticks)), "ticks must be strictly increasing"
        for s in states:
            assert {"type", "tick", "pose", "bodies", "metrics"} <= set(s)
            assert len(s["pose"]) == 3
            kinds = {b["kind"] for b in s["bodies"]}
            assert "robot" in kinds and "wall" in kinds
            for b in s["bodies"]:
                assert {"id", "kind", "vertices"} <= set(b)
                assert all(len(pt) == 2 for ring in b["vertices"] for pt in ring)
            assert "reward" in s["metrics"]

    run_with_server({"env": "maze", "variant": "open"}, scenario, tmp_path)


def test_second_connection_rejected_busy(tmp_path):
    async def scenario(url, server):
        async with websockets.connect(url) as first:
            await first.send(json.dumps({"type": "cmd", "cmd": {"keys": []}}))
            async with websockets.connect(url) as second:
                msg = await _recv_json(second)
                assert msg["type"] == "busy"

    run_with_server({"env": "maze"}, scenario, tmp_path)


def test_pause_on_disconnect_resume_on_reconnect(tmp_path):
    async def scenario(url, server):
        async with websockets.connect(url) as ws:
            await ws.send(json.dumps({"type": "cmd", "cmd": {"keys": []}}))
            t1 = (await _recv_type(ws, "state"))["tick"]
        await asyncio.sleep(0.05)  # world must hold while no client
        frozen = server._env.world.tick
        await asyncio.sleep(0.05)
        assert server._env.world.tick == frozen
        async with websockets.connect(url) as ws:
            t2 = (await _recv_type(ws, "state"))["tick"]
            assert t1 <= t2 <= frozen
            await ws.send(json.dumps({"type": "cmd", "cmd": {"keys": []}}))
            t3 = (await _recv_type(ws, "state"))["tick"]
            assert t3 > t2

    run_with_server({"env": "maze"}, scenario, tmp_path)


def test_reset_starts_new_episode_with_seed(tmp_path):
    async def scenario(url, server):
        async with websockets.connect(url) as ws:
            await ws.send(json.dumps({"type": "cmd", "cmd": {"keys": []}}))
            await _recv_type(ws, "state")
            await ws.send(
                json.dumps({"type": "reset", "spec": {"max_steps": 17}, "seed": 5})
            )
            while True:
                msg = await _recv_type(ws, "state")
                if msg["tick"] <= 3:  # fresh world
                    break
        assert server._seed == 5
        assert server._env.spec.max_steps == 17

    run_with_server({"env": "maze"}, scenario, tmp_path)


def test_episode_end_and_log_written(tmp_path):
    async def scenario(url, server):
        async with websockets.connect(url) as ws:
            await ws.send(json.dumps({"type": "cmd", "cmd": {"omega": 0.8}}))
            end = await _recv_type(ws, "episode_end")
        return end

    end = run_with_server({"env": "maze", "max_steps": 40}, scenario, tmp_path)
    assert "metrics" in end and "seed" in end
    log_path = Path(end["log"])
    assert log_path.exists()
    log = EpisodeLog.load(log_path)
    assert log.header["policy"] == "teleop"
    assert log.footer["truncated"] is True
    # cmd applies from the step after its frame arrives, then holds (last-write-wins)
    actions = [r["action"] for r in log.steps]
    assert actions[-1] == 0.8
    first = actions.index(0.8)
    assert all(a == 0.8 for a in actions[first:])


def test_loopback_scripted_drive_matches_harness(tmp_path):
    """An episode captured over the wire replays to identical metrics."""

    async def scenario(url, server):
        async with websockets.connect(url) as ws:
            # open maze: goal straight ahead, no steering needed
            await ws.send(json.dumps({"type": "cmd", "cmd": {"keys": []}}))
            return await _recv_type(ws, "episode_end")

    end = run_with_server({"env": "maze", "variant": "open"}, scenario, tmp_path)
    assert end["outcome"]["success"] is True
    log = EpisodeLog.load(end["log"])
    again = replay(end["log"])
    assert again.footer["metrics"] == end["metrics"]
    assert again.footer == log.footer
