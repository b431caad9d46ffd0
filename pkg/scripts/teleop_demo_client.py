#!/usr/bin/env python3
"""Minimal scripted wire client: drives the robot straight until episode end.

Start a server first, e.g.:
    pushnav teleop-serve --env maze --variant open --port 8765
then:
    python scripts/teleop_demo_client.py --port 8765
"""
import argparse
import asyncio
import json

import websockets


async def drive(host: str, port: int):
    async with websockets.connect(f"ws://{host}:{port}") as ws:
        await ws.send(json.dumps({"type": "cmd", "cmd": {"keys": []}}))
        async for raw in ws:
            msg = json.loads(raw)
            if msg["type"] == "state":
                x, y, th = msg["pose"]
                print(f"\rtick {msg['tick']:6d}  pose ({x:6.2f}, {y:6.2f})", end="")
            elif msg["type"] == "episode_end":
                print("\nepisode finished")
                print("metrics:", msg["metrics"])
                print("log:", msg["log"])
                return


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8765)
    args = ap.parse_args()
    asyncio.run(drive(args.host, args.port))


if __name__ == "__main__":
    main()
