#!/usr/bin/env python3
"""Measure raw physics throughput (steps per second) at a given body count."""
import argparse
import time

import numpy as np

from pushnav.physics import Body, PhysicsParams, Role, World, box


def build_world(n_bodies: int, seed: int = 0) -> World:
    rng = np.random.default_rng(seed)
    world = World(PhysicsParams())
    side = 10.0
    for i, (cx, cy, w, h) in enumerate(
        [
            (side / 2, -0.1, side, 0.2),
            (side / 2, side + 0.1, side, 0.2),
            (-0.1, side / 2, 0.2, side),
            (side + 0.1, side / 2, 0.2, side),
        ]
    ):
        world.add(Body.make(i, box(w, h), Role.WALL, np.array([cx, cy, 0.0])))
    for i in range(n_bodies - 4):
        pose = np.array([rng.uniform(0.5, side - 0.5), rng.uniform(0.5, side - 0.5), rng.uniform(-3, 3)])
        b = Body.make(4 + i, box(0.25, 0.25), Role.BOX, pose)
        b.vel = rng.uniform(-1, 1, size=2)
        b.asleep = False
        world.add(b)
    return world


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bodies", type=int, default=50)
    ap.add_argument("--steps", type=int, default=5000)
    args = ap.parse_args()

    world = build_world(args.bodies)
    world.advance()  # warm caches before timing
    t0 = time.perf_counter()
    for _ in range(args.steps):
        world.advance()
    dt = time.perf_counter() - t0
    print(f"{args.bodies} bodies: {args.steps} steps in {dt:.3f}s = {args.steps / dt:,.0f} steps/s")


if __name__ == "__main__":
    main()
